import csv
import json

import pytest

from fdx import io
from fdx.cli import BENCH_COLUMNS, main
from fdx.model import AsymInstance, ExternInstance


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def error_of(err):
    payload = json.loads(err.strip().splitlines()[-1])
    assert set(payload) == {"error", "message", "exit_code"}
    return payload


@pytest.fixture
def lb(tmp_path, capsys):
    path = tmp_path / "lb.json"
    assert run(capsys, "generate", "--family", "lb-asym", "--q", 2, "--copies", 1, "-o", path)[0] == 0
    return path


def test_generate_families(tmp_path, capsys):
    for family in ("lb-asym", "star", "random", "mm-sets"):
        path = tmp_path / f"{family}.json"
        assert run(capsys, "generate", "--family", family, "--q", 2, "--copies", 1, "-o", path)[0] == 0
        data = io.read_json(path)
        if family == "mm-sets":
            assert data["m"] == 2 and len(data["valuations"]) == 2
        else:
            inst = io.load_instance(path)
            assert isinstance(inst, AsymInstance if family == "lb-asym" else ExternInstance)


def test_generate_to_stdout(capsys):
    code, out, _ = run(capsys, "generate", "--family", "random", "--n", 2, "--m", 3, "--seed", 4)
    assert code == 0 and io.validate(json.loads(out)).m == 3


def test_convert_round_trips_are_byte_identical(tmp_path, capsys):
    # asym binary -> extern -> asym
    src = tmp_path / "a.json"
    run(capsys, "generate", "--family", "random", "--model", "asym", "--binary", "--n", 3, "--m", 5, "-o", src)
    mid, back = tmp_path / "b.json", tmp_path / "c.json"
    assert run(capsys, "convert", src, "--lift", "binary", "-o", mid)[0] == 0
    assert run(capsys, "convert", mid, "-o", back)[0] == 0
    assert src.read_bytes() == back.read_bytes()
    # a lifted extern instance -> asym -> extern
    again, twice = tmp_path / "d.json", tmp_path / "e.json"
    run(capsys, "convert", back, "--lift", "binary", "-o", again)
    run(capsys, "convert", again, "-o", twice)
    run(capsys, "convert", twice, "--lift", "binary", "-o", again.with_suffix(".2.json"))
    assert again.read_bytes() == again.with_suffix(".2.json").read_bytes() == mid.read_bytes()


def test_convert_rejects_non_binary_lift(tmp_path, capsys):
    src = tmp_path / "a.json"
    src.write_text(json.dumps({"model": "asym", "n": 2, "values": [[None, [2]], [[0], None]]}))
    code, _, err = run(capsys, "convert", src, "--lift", "binary")
    assert code == 2 and error_of(err)["error"] == "NotBinary"


@pytest.mark.parametrize("method", ["nonconsensus", "consensus", "truthful"])
def test_allocate_writes_valid_artifacts(lb, tmp_path, capsys, method):
    out_dir = tmp_path / method
    code, out, _ = run(capsys, "allocate", lb, "--method", method, "--seed", 3, "--out-dir", out_dir)
    assert code == 0
    summary = json.loads(out)
    report = io.read_json(out_dir / "report.json")
    assert report["seed"] == 3 and report["solver"]["seed"] == 3
    assert report["measured_c"] <= report["certified_bound"] == 14 * report["T_final"]
    assert summary["measured_c"] == report["measured_c"]
    hashes = report["artifacts"]
    assert hashes["allocation_sha256"] == io.sha256_file(out_dir / "allocation.json")
    assert hashes["certificate_sha256"] == io.sha256_file(out_dir / "certificate.json")
    assert hashes["instance_sha256"] == io.sha256_file(lb)
    inst = io.load_instance(lb)
    io.allocation_from_json(io.read_json(out_dir / "allocation.json"), inst.m)
    code, out, _ = run(capsys, "certify", lb, out_dir / "allocation.json")
    assert json.loads(out)["c"] == report["measured_c"]


def test_certify_no_envy(tmp_path, capsys):
    inst = tmp_path / "i.json"
    inst.write_text(json.dumps({"model": "asym", "n": 2, "values": [[None, [1, 1]], [[1, 1], None]]}))
    alloc = tmp_path / "a.json"
    alloc.write_text(json.dumps({"n": 2, "bundles": [[0], [1]]}))
    cert = tmp_path / "c.json"
    code, out, _ = run(capsys, "certify", inst, alloc, "-o", cert)
    assert code == 0 and json.loads(out) == {"c": 0}
    assert io.read_json(cert)["c"] == 0


def test_oracle_and_budget(lb, capsys):
    code, out, _ = run(capsys, "oracle", lb)
    assert code == 0 and json.loads(out)["c_star"] == 1
    code, _, err = run(capsys, "oracle", lb, "--budget", 10)
    assert code == 3 and error_of(err)["exit_code"] == 3


def test_oracle_budget_from_environment(lb, capsys, monkeypatch):
    monkeypatch.setenv("FDX_BUDGET", "10")
    assert run(capsys, "oracle", lb)[0] == 3


def test_wdisc(tmp_path, capsys):
    path = tmp_path / "sets.json"
    run(capsys, "generate", "--family", "mm-sets", "--q", 2, "--copies", 2, "-o", path)
    code, out, _ = run(capsys, "wdisc", path, "--p", "1/5")
    assert code == 0 and json.loads(out)["value"] == "2/5"
    code, _, err = run(capsys, "wdisc", path, "--p", "one-fifth")
    assert code == 2 and error_of(err)["error"] == "NonRational"


def test_invalid_and_missing_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "certify", bad, bad)
    assert code == 2 and error_of(err)["exit_code"] == 2
    code, _, err = run(capsys, "oracle", tmp_path / "missing.json")
    assert code == 1 and error_of(err)["exit_code"] == 1
    diag = tmp_path / "diag.json"
    diag.write_text(json.dumps({"model": "asym", "n": 2, "values": [[[1], [1]], [[1], None]]}))
    code, _, err = run(capsys, "oracle", diag)
    assert code == 2 and error_of(err)["error"] == "DiagonalPresent"


def test_bench_is_deterministic(tmp_path, capsys):
    args = ["bench", "--n", 4, 9, 16, 25, "--seeds", 0, 1, "--no-timing"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, *args, "-o", a)[0] == 0
    assert run(capsys, *args, "--jobs", 2, "-o", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(a.open()))
    assert list(rows[0]) == BENCH_COLUMNS
    assert [(int(r["n"]), int(r["seed"])) for r in rows] == [(n, s) for n in (4, 9, 16, 25) for s in (0, 1)]
    for r in rows:
        assert int(r["measured_c"]) <= int(r["certified_bound"]) == 14 * int(r["T_final"])
