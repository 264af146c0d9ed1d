"""JSON readers and writers for instances, allocations, certificates and valuation lists."""

import hashlib
import json
from pathlib import Path

from .errors import ValidationError
from .model import Allocation, AsymInstance, ExternInstance, format_rational, to_rational, validate


def instance_to_json(instance) -> dict:
    if isinstance(instance, ExternInstance):
        model = "externalities"
        values = [[[format_rational(x) for x in vec] for vec in row] for row in instance.values]
    elif isinstance(instance, AsymInstance):
        model = "asym"
        values = [
            [None if vec is None else [format_rational(x) for x in vec] for vec in row] for row in instance.values
        ]
    else:
        raise TypeError(f"not an instance: {type(instance).__name__}")
    return {"model": model, "n": instance.n, "items": list(instance.items), "values": values}


def allocation_to_json(alloc: Allocation) -> dict:
    return {"bundles": [list(b) for b in alloc.bundles]}


def allocation_from_json(data: dict, m: int) -> Allocation:
    try:
        bundles = data["bundles"]
    except (KeyError, TypeError):
        raise ValidationError("allocation file needs a 'bundles' list") from None
    return Allocation.from_bundles(bundles, m)


def valuations_from_json(data) -> list:
    """Accepts a bare list of vectors or an object with a 'valuations' list."""
    if isinstance(data, dict):
        data = data.get("valuations")
    if not isinstance(data, list) or any(not isinstance(v, list) for v in data):
        raise ValidationError("expected a list of valuation vectors")
    return [[to_rational(x) for x in v] for v in data]


def dumps(data) -> str:
    return json.dumps(data) + "\n"


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path, data) -> str:
    """Write UTF-8 JSON and return the sha256 of the bytes written."""
    text = dumps(data)
    Path(path).write_text(text, encoding="utf-8")
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def load_instance(path):
    return validate(read_json(path))


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
