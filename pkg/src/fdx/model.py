"""Exact data model: instances of both envy models, allocations and colorings.

All numeric values are :class:`fractions.Fraction`.  Agents, colors and items
are zero-based indices; item names are cosmetic.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Sequence

from .errors import (
    DiagonalPresent,
    DimensionMismatch,
    InvalidAllocation,
    NonRational,
    SameAgent,
    ValidationError,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value) -> Fraction:
    """Parse an int, a Fraction or a ``"p/q"`` string.  Floats are rejected."""
    if isinstance(value, bool):
        raise NonRational(f"booleans are not values: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise NonRational(f"cannot parse {value!r} as a rational") from None
    raise NonRational(f"expected int or 'p/q' string, got {type(value).__name__} {value!r}")


def format_rational(q: Fraction):
    """JSON form of a rational: plain int when integral, otherwise ``"p/q"``."""
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def _default_items(m):
    return tuple(f"x{t}" for t in range(m))


def _check_items(items, m):
    if items is None:
        return _default_items(m)
    items = tuple(str(it) for it in items)
    if len(items) != m:
        raise DimensionMismatch(f"{len(items)} item names for {m} items")
    return items


def _infer_m(values, n, asym):
    for i in range(n):
        for j in range(n):
            if asym and i == j:
                continue
            try:
                return len(values[i][j])
            except TypeError:
                raise DimensionMismatch(f"entry [{i}][{j}] is not a list") from None
    return 0


@dataclass(frozen=True)
class ExternInstance:
    """Externalities model: ``values[i][j][x]`` is agent i's value when x goes to agent j."""

    n: int
    values: tuple
    items: tuple = None

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ValidationError(f"agent count must be a positive int, got {n!r}")
        rows = self.values
        if len(rows) != n:
            raise DimensionMismatch(f"declared n={n} but table has {len(rows)} agent rows")
        m = len(self.items) if self.items is not None else _infer_m(rows, n, asym=False)
        table = []
        for i, row in enumerate(rows):
            if len(row) != n:
                raise DimensionMismatch(f"agent {i}: {len(row)} recipient rows, expected {n}")
            trow = []
            for j, vec in enumerate(row):
                if vec is None or len(vec) != m:
                    raise DimensionMismatch(f"entry [{i}][{j}] does not have {m} item values")
                trow.append(tuple(to_rational(v) for v in vec))
            table.append(tuple(trow))
        object.__setattr__(self, "values", tuple(table))
        object.__setattr__(self, "items", _check_items(self.items, m))

    @property
    def m(self) -> int:
        return len(self.items)

    def value(self, i, j, x) -> Fraction:
        return self.values[i][j][x]

    @cached_property
    def is_binary(self) -> bool:
        return all(v in (0, 1) for row in self.values for vec in row for v in vec)

    @cached_property
    def has_no_chores(self) -> bool:
        return all(
            self.values[i][i][x] >= self.values[i][j][x]
            for i in range(self.n)
            for j in range(self.n)
            for x in range(self.m)
        )


@dataclass(frozen=True)
class AsymInstance:
    """Asymmetric envy model: ``values[i][j]`` is the per-item vector of v_{i,j}; diagonal is None."""

    n: int
    values: tuple
    items: tuple = None

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ValidationError(f"agent count must be a positive int, got {n!r}")
        rows = self.values
        if len(rows) != n:
            raise DimensionMismatch(f"declared n={n} but table has {len(rows)} agent rows")
        m = len(self.items) if self.items is not None else _infer_m(rows, n, asym=True)
        table = []
        for i, row in enumerate(rows):
            if len(row) != n:
                raise DimensionMismatch(f"agent {i}: {len(row)} recipient rows, expected {n}")
            trow = []
            for j, vec in enumerate(row):
                if i == j:
                    if vec is not None:
                        raise DiagonalPresent(f"v_{{{i},{i}}} must be absent (null)")
                    trow.append(None)
                    continue
                if vec is None or len(vec) != m:
                    raise DimensionMismatch(f"entry [{i}][{j}] does not have {m} item values")
                trow.append(tuple(to_rational(v) for v in vec))
            table.append(tuple(trow))
        object.__setattr__(self, "values", tuple(table))
        object.__setattr__(self, "items", _check_items(self.items, m))

    @property
    def m(self) -> int:
        return len(self.items)

    def pair(self, i, j) -> tuple:
        if i == j:
            raise SameAgent(f"no valuation for the diagonal pair ({i}, {i})")
        return self.values[i][j]

    def pairs(self):
        """Ordered pairs (i, j), i != j, in lexicographic order."""
        return [(i, j) for i in range(self.n) for j in range(self.n) if i != j]

    @cached_property
    def is_binary(self) -> bool:
        return all(v in (0, 1) for i, j in self.pairs() for v in self.values[i][j])

    @cached_property
    def has_no_chores(self) -> bool:
        return all(v >= 0 for i, j in self.pairs() for v in self.values[i][j])


def validate(raw: dict):
    """Build an instance from parsed JSON-like data (see ``io.load_instance``)."""
    if not isinstance(raw, dict):
        raise ValidationError("instance data must be a JSON object")
    model = raw.get("model", "externalities")
    try:
        n = raw["n"]
        values = raw["values"]
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r}") from None
    items = raw.get("items")
    if not isinstance(values, list):
        raise DimensionMismatch("values must be a nested list")
    if model == "externalities":
        return ExternInstance(n, values, items)
    if model == "asym":
        return AsymInstance(n, values, items)
    raise ValidationError(f"unknown model {model!r}")


class _Assignment:
    """Shared behaviour of total maps item -> part index."""

    assignment: tuple

    def _parts(self, count):
        parts = [[] for _ in range(count)]
        for x, a in enumerate(self.assignment):
            parts[a].append(x)
        return tuple(tuple(p) for p in parts)

    @property
    def m(self) -> int:
        return len(self.assignment)

    def owner(self, x) -> int:
        return self.assignment[x]


def _check_assignment(assignment, count, what):
    assignment = tuple(int(a) for a in assignment)
    for x, a in enumerate(assignment):
        if not 0 <= a < count:
            raise InvalidAllocation(f"item {x} assigned to {what} {a}, outside [0, {count})")
    return assignment


def _from_parts(parts, m):
    assignment = [None] * m
    for a, part in enumerate(parts):
        for x in part:
            x = int(x)
            if not 0 <= x < m:
                raise InvalidAllocation(f"item {x} outside [0, {m})")
            if assignment[x] is not None:
                raise InvalidAllocation(f"item {x} appears in more than one bundle")
            assignment[x] = a
    missing = [x for x, a in enumerate(assignment) if a is None]
    if missing:
        raise InvalidAllocation(f"items {missing} are not allocated")
    return assignment


@dataclass(frozen=True)
class Allocation(_Assignment):
    """Complete allocation: ``assignment[x]`` is the agent receiving item x."""

    n: int
    assignment: tuple = field(default=())

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("an allocation needs at least one agent")
        object.__setattr__(self, "assignment", _check_assignment(self.assignment, self.n, "agent"))

    @classmethod
    def from_bundles(cls, bundles: Sequence[Iterable[int]], m: int) -> "Allocation":
        if len(bundles) == 0:
            raise InvalidAllocation("no bundles given")
        return cls(len(bundles), tuple(_from_parts(bundles, m)))

    @cached_property
    def bundles(self) -> tuple:
        return self._parts(self.n)

    def bundle(self, i) -> tuple:
        return self.bundles[i]


@dataclass(frozen=True)
class Coloring(_Assignment):
    """Total k-coloring: ``assignment[x]`` is the color of item x."""

    k: int
    assignment: tuple = field(default=())

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("a coloring needs k >= 1")
        object.__setattr__(self, "assignment", _check_assignment(self.assignment, self.k, "color"))

    @cached_property
    def classes(self) -> tuple:
        return self._parts(self.k)

    def to_allocation(self) -> Allocation:
        return Allocation(self.k, self.assignment)


def allocation_value(instance: ExternInstance, alloc: Allocation, i: int) -> Fraction:
    """V_i(A): sum over items of V_i(holder(x), x)."""
    _check_fits(instance, alloc)
    table = instance.values[i]
    return sum((table[j][x] for x, j in enumerate(alloc.assignment)), ZERO)


def swap_bundles(alloc: Allocation, i: int, j: int) -> Allocation:
    if i == j:
        raise SameAgent(f"cannot swap agent {i} with itself")
    for a in (i, j):
        if not 0 <= a < alloc.n:
            raise InvalidAllocation(f"agent {a} outside [0, {alloc.n})")
    relabel = {i: j, j: i}
    return Allocation(alloc.n, tuple(relabel.get(a, a) for a in alloc.assignment))


def _check_fits(instance, alloc):
    if alloc.n != instance.n or alloc.m != instance.m:
        raise InvalidAllocation(
            f"allocation for n={alloc.n}, m={alloc.m} does not fit instance n={instance.n}, m={instance.m}"
        )
