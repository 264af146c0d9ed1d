"""Instance families: Hadamard-based lower-bound instances and seeded random instances.

Agent numbering is zero-based.  In the lower-bound families agent 0 values
every item equally, and set ``S_s`` (s = 0..q-1) is watched by the agent
pair ``(2s+1, 2s+2)``.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotPowerOfTwo, ValidationError
from .model import ONE, ZERO, AsymInstance, ExternInstance


def _is_power_of_two(q) -> bool:
    return isinstance(q, (int, np.integer)) and q >= 1 and (q & (q - 1)) == 0


def sylvester_hadamard(order: int) -> np.ndarray:
    if not _is_power_of_two(order):
        raise NotPowerOfTwo(f"Sylvester construction needs a power of two, got {order}")
    H = np.ones((1, 1), dtype=np.int64)
    while H.shape[0] < order:
        H = np.block([[H, H], [H, -H]])
    return H


@dataclass(frozen=True)
class HyperedgeSets:
    q: int
    m: int
    sets: tuple

    def __post_init__(self):
        if self.q < 1 or len(self.sets) != self.q:
            raise ValidationError(f"expected q={self.q} >= 1 sets, got {len(self.sets)}")
        sets = tuple(frozenset(int(x) for x in s) for s in self.sets)
        for s in sets:
            if any(not 0 <= x < self.m for x in s):
                raise ValidationError(f"set items must lie in [0, {self.m})")
        object.__setattr__(self, "sets", sets)

    def complement(self, s) -> frozenset:
        return frozenset(range(self.m)) - self.sets[s]

    def indicator(self, s) -> tuple:
        return tuple(ONE if x in self.sets[s] else ZERO for x in range(self.m))

    def indicators(self) -> list:
        return [self.indicator(s) for s in range(self.q)]


def mm_sets(q: int, r: int = None) -> HyperedgeSets:
    """Rows of r side-by-side copies of (J + H)/2 for a q x q Sylvester H; r defaults to 2q.

    Item ``c*q + col`` is column ``col`` of copy ``c``.
    """
    H = sylvester_hadamard(q)
    r = 2 * q if r is None else r
    if r < 1:
        raise ValidationError(f"need at least one copy, got r={r}")
    half = (1 + H) // 2
    sets = [frozenset(c * q + col for c in range(r) for col in range(q) if half[row, col]) for row in range(q)]
    return HyperedgeSets(q, q * r, tuple(sets))


def lb_asym_instance(sets: HyperedgeSets) -> AsymInstance:
    q, m = sets.q, sets.m
    n = 2 * q + 1
    ones = (ONE,) * m
    table = [[None] * n for _ in range(n)]
    for j in range(1, n):
        table[0][j] = ones
    for s in range(q):
        inside = sets.indicator(s)
        outside = tuple(ONE - x for x in inside)
        lo, hi = 2 * s + 1, 2 * s + 2
        for j in range(n):
            if j != lo:
                table[lo][j] = inside if j == 0 else outside
            if j != hi:
                table[hi][j] = outside if j == 0 else inside
    return AsymInstance(n, table)


def star_extern_instance(sets: HyperedgeSets) -> ExternInstance:
    """Externalities instance whose only externalities point at agent 0."""
    q, m = sets.q, sets.m
    n = 2 * q + 1
    table = [[[ZERO] * m for _ in range(n)] for _ in range(n)]
    table[0][0] = [ONE] * m
    for s in range(q):
        lo, hi = 2 * s + 1, 2 * s + 2
        members = sets.sets[s]
        for x in range(m):
            # lo dislikes agent 0 holding S_s items; hi dislikes it holding the complement
            hurt, gain = (lo, hi) if x in members else (hi, lo)
            table[hurt][0][x] = -ONE
            table[gain][0][x] = ONE
            table[gain][gain][x] = ONE
    return ExternInstance(n, table)


def random_instance(
    n: int,
    m: int,
    model: str = "externalities",
    low: int = -5,
    high: int = 5,
    binary: bool = False,
    no_chores: bool = False,
    seed: int = 0,
    denominator: int = 1,
):
    """Seeded random instance with values ``k/denominator`` for integer k in [low*d, high*d].

    ``binary`` samples from {0, 1}.  ``no_chores`` raises each agent's own
    entry to the maximum over recipients (externalities model) or clamps the
    range at zero (asymmetric model).
    """
    if n < 1 or m < 0:
        raise ValidationError(f"need n >= 1 and m >= 0, got n={n}, m={m}")
    if model not in ("externalities", "asym"):
        raise ValidationError(f"unknown model {model!r}")
    rng = np.random.default_rng(seed)
    if binary:
        lo_i, hi_i, d = 0, 1, 1
    else:
        d = int(denominator)
        if d < 1:
            raise ValidationError("denominator must be positive")
        lo_i, hi_i = int(low) * d, int(high) * d
        if model == "asym" and no_chores:
            lo_i = max(lo_i, 0)
        if lo_i > hi_i:
            raise ValidationError(f"empty value range [{low}, {high}]")
    raw = rng.integers(lo_i, hi_i + 1, size=(n, n, m))
    if model == "externalities":
        if no_chores:
            for i in range(n):
                raw[i, i] = raw[i].max(axis=0) if m else raw[i, i]
        table = [[[Fraction(int(v), d) for v in raw[i, j]] for j in range(n)] for i in range(n)]
        return ExternInstance(n, table)
    table = [
        [None if i == j else [Fraction(int(v), d) for v in raw[i, j]] for j in range(n)] for i in range(n)
    ]
    return AsymInstance(n, table)
