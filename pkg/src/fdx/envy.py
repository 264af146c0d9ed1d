"""Envy checks and EF-c certification with exact arithmetic.

The production path computes, per ordered pair, the minimal number of items
whose removal cures the envy with a greedy rule that is provably optimal for
additive valuations.  The ``brute_*`` functions are exhaustive oracles used to
cross-check it.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidAllocation, OverlappingBundles, SameAgent, resolve_budget
from .model import ZERO, Allocation, AsymInstance, ExternInstance, allocation_value, swap_bundles

PAIR_BUDGET = 20
EFC_BUDGET = 10**7


def _disjoint(a_i, a_j):
    a_i, a_j = tuple(a_i), tuple(a_j)
    overlap = set(a_i) & set(a_j)
    if overlap:
        raise OverlappingBundles(f"items {sorted(overlap)} appear in both bundles")
    return a_i, a_j


def envy_margin(v: Sequence[Fraction], a_i, a_j) -> Fraction:
    """v(A_j) - v(A_i); positive exactly when the holder of A_i envies A_j."""
    a_i, a_j = _disjoint(a_i, a_j)
    return sum((v[x] for x in a_j), ZERO) - sum((v[x] for x in a_i), ZERO)


def min_discard_pair(v: Sequence[Fraction], a_i, a_j):
    """Smallest discard set S (within A_i and A_j) with v(A_i minus S) >= v(A_j minus S).

    Removing a chore from A_i or a good from A_j lowers the margin by |v(x)|,
    every other removal raises it, so taking the largest gains first is
    optimal.  Ties go to the lower item index.  Returns ``(count, witness)``
    with the witness in the order the items were taken.
    """
    a_i, a_j = _disjoint(a_i, a_j)
    margin = envy_margin(v, a_i, a_j)
    if margin <= 0:
        return 0, ()
    gains = [(-v[x], x) for x in a_i if v[x] < 0] + [(v[x], x) for x in a_j if v[x] > 0]
    gains.sort(key=lambda g: (-g[0], g[1]))
    taken = []
    total = ZERO
    for gain, x in gains:
        taken.append(x)
        total += gain
        if total >= margin:
            break
    return len(taken), tuple(taken)


def brute_min_discard_pair(v: Sequence[Fraction], a_i, a_j, budget=None) -> int:
    """Exhaustive minimum discard count over all subsets of A_i and A_j."""
    a_i, a_j = _disjoint(a_i, a_j)
    pool = a_i + a_j
    limit = resolve_budget(budget, PAIR_BUDGET)
    if len(pool) > limit:
        raise BudgetExceeded(f"{len(pool)} candidate items exceed the pair budget {limit}")
    side_i = set(a_i)
    for size in range(len(pool) + 1):
        for drop in itertools.combinations(pool, size):
            dropped = set(drop)
            keep_i = sum((v[x] for x in a_i if x not in dropped), ZERO)
            keep_j = sum((v[x] for x in a_j if x not in dropped), ZERO)
            if keep_i >= keep_j:
                return size
    raise AssertionError("discarding every item always cures envy")  # pragma: no cover


@dataclass(frozen=True)
class PairRecord:
    i: int
    j: int
    count: int
    discards: tuple


@dataclass(frozen=True)
class EfcCertificate:
    c: int
    pairs: tuple

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "pairs": [
                {"i": r.i, "j": r.j, "count": r.count, "discards": list(r.discards)} for r in self.pairs
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "EfcCertificate":
        pairs = tuple(
            PairRecord(int(r["i"]), int(r["j"]), int(r["count"]), tuple(int(x) for x in r["discards"]))
            for r in data["pairs"]
        )
        return cls(int(data["c"]), pairs)


def _fits(instance, alloc):
    if alloc.n != instance.n or alloc.m != instance.m:
        raise InvalidAllocation(
            f"allocation for n={alloc.n}, m={alloc.m} does not fit instance n={instance.n}, m={instance.m}"
        )


def certify_efc(instance: AsymInstance, alloc: Allocation) -> EfcCertificate:
    _fits(instance, alloc)
    bundles = alloc.bundles
    records = []
    for i, j in instance.pairs():
        count, witness = min_discard_pair(instance.values[i][j], bundles[i], bundles[j])
        records.append(PairRecord(i, j, count, witness))
    return EfcCertificate(max((r.count for r in records), default=0), tuple(records))


def verify_certificate(instance: AsymInstance, alloc: Allocation, cert: EfcCertificate) -> bool:
    """Replay every witness and check the reported counts; does not check minimality."""
    _fits(instance, alloc)
    bundles = alloc.bundles
    expected = {(i, j) for i, j in instance.pairs()}
    seen = set()
    for r in cert.pairs:
        if (r.i, r.j) not in expected or (r.i, r.j) in seen:
            return False
        seen.add((r.i, r.j))
        dropped = set(r.discards)
        if len(dropped) != len(r.discards) or len(dropped) != r.count:
            return False
        if not dropped <= set(bundles[r.i]) | set(bundles[r.j]):
            return False
        v = instance.values[r.i][r.j]
        keep_i = [x for x in bundles[r.i] if x not in dropped]
        keep_j = [x for x in bundles[r.j] if x not in dropped]
        if envy_margin(v, keep_i, keep_j) > 0:
            return False
    return seen == expected and cert.c == max((r.count for r in cert.pairs), default=0)


def extern_envy(instance: ExternInstance, alloc: Allocation, i: int, j: int) -> bool:
    """True when agent i strictly prefers the allocation with bundles i and j swapped."""
    if i == j:
        raise SameAgent(f"agent {i} cannot envy itself")
    swapped = swap_bundles(alloc, i, j)
    return allocation_value(instance, swapped, i) > allocation_value(instance, alloc, i)


def _integer_rows(instance: AsymInstance):
    """Scale each v_{i,j} by the lcm of its denominators; discard counts are scale-invariant."""
    rows = {}
    for i, j in instance.pairs():
        vec = instance.values[i][j]
        scale = math.lcm(*(q.denominator for q in vec)) if vec else 1
        rows[i, j] = [int(q * scale) for q in vec]
    return rows


def brute_min_efc(instance: AsymInstance, budget=None):
    """Minimum over all complete allocations of the certified c, with the first argmin.

    Allocations are enumerated in base-n order (item 0 most significant) and
    processed in vectorised chunks; every value is an exact integer.
    """
    n, m = instance.n, instance.m
    limit = resolve_budget(budget, EFC_BUDGET)
    total = n**m
    if total > limit:
        raise BudgetExceeded(f"{n}^{m} = {total} allocations exceed the budget {limit}")
    pairs = instance.pairs()
    if not pairs or m == 0:
        return 0, Allocation(n, (0,) * m)
    rows = _integer_rows(instance)
    bound = max((abs(x) for r in rows.values() for x in r), default=0) * max(m, 1)
    dtype = np.int64 if bound < 2**62 else object
    vecs = {key: np.array(r, dtype=dtype) for key, r in rows.items()}
    powers = n ** np.arange(m - 1, -1, -1, dtype=np.int64)

    best_c, best_idx = None, None
    chunk = max(1, min(total, 1 << 16))
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        assign = (idx[:, None] // powers[None, :]) % n
        worst = np.zeros(len(idx), dtype=np.int64)
        for i, j in pairs:
            worst = np.maximum(worst, _pair_counts(vecs[i, j], assign == i, assign == j))
        pos = int(np.argmin(worst))
        if best_c is None or worst[pos] < best_c:
            best_c, best_idx = int(worst[pos]), int(idx[pos])
            if best_c == 0:
                break
    assignment = tuple(int(d) for d in (best_idx // powers) % n)
    return best_c, Allocation(n, assignment)


def _pair_counts(v, in_i, in_j):
    """Vectorised greedy discard count for one pair over a batch of allocations."""
    zero = np.zeros_like(v)
    vi = np.where(in_i, v, zero)
    vj = np.where(in_j, v, zero)
    margin = vj.sum(axis=1) - vi.sum(axis=1)
    gains = np.where(vi < 0, -vi, zero) + np.where(vj > 0, vj, zero)
    gains = -np.sort(-gains, axis=1)
    reached = np.cumsum(gains, axis=1)
    counts = 1 + (reached < margin[:, None]).sum(axis=1)
    return np.where(margin > 0, counts, 0).astype(np.int64)
