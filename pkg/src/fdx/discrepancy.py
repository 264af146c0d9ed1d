"""Multicolor and weighted discrepancy: exact evaluators and heuristic solvers.

Each color ``l`` carries its own collection of [0, 1]-valued additive
valuations; the discrepancy of a coloring is the largest gap between a
valuation's share of its own color class and the proportional benchmark
``v(M)/k``.

Solvers search with float64 arithmetic and then re-evaluate their answer
exactly, so ``SolveResult.achieved`` is always an exact rational.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, ColorCountMismatch, DimensionMismatch, ValidationError, resolve_budget
from .model import ZERO, Coloring, to_rational

EXHAUSTIVE_BUDGET = 10**7
WDISC_BUDGET = 2**25
STRATEGIES = ("exhaustive", "random_restarts", "local_search")
DEFAULT_RUNS = {"random_restarts": 256, "local_search": 4}
_TOL = 1e-9


@dataclass(frozen=True)
class DiscrepancyInstance:
    """``collections[l]`` is the tuple of valuation vectors attached to color l."""

    k: int
    m: int
    collections: tuple

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("need at least one color")
        if len(self.collections) != self.k:
            raise ColorCountMismatch(f"{len(self.collections)} collections for k={self.k} colors")
        cols = []
        for ell, coll in enumerate(self.collections):
            vecs = []
            for vec in coll:
                if len(vec) != self.m:
                    raise DimensionMismatch(f"color {ell}: vector of length {len(vec)}, expected {self.m}")
                vec = tuple(to_rational(x) for x in vec)
                if any(x < 0 or x > 1 for x in vec):
                    raise ValidationError(f"color {ell}: values must lie in [0, 1]")
                vecs.append(vec)
            cols.append(tuple(vecs))
        object.__setattr__(self, "collections", tuple(cols))

    @property
    def sizes(self) -> tuple:
        return tuple(len(c) for c in self.collections)

    @cached_property
    def benchmarks(self) -> tuple:
        """Exact v(M)/k for every vector, laid out like ``collections``."""
        return tuple(tuple(sum(vec, ZERO) / self.k for vec in coll) for coll in self.collections)

    @cached_property
    def dense(self) -> np.ndarray:
        """Float array of shape (k, max collection size, m), zero padded."""
        width = max(self.sizes, default=0)
        W = np.zeros((self.k, width, self.m))
        for ell, coll in enumerate(self.collections):
            for u, vec in enumerate(coll):
                W[ell, u] = [float(x) for x in vec]
        return W


@dataclass(frozen=True)
class SolveResult:
    coloring: Coloring
    achieved: Fraction
    strategy: str


def _color_deviations(D: DiscrepancyInstance, classes) -> list:
    devs = []
    for coll, bench, cls in zip(D.collections, D.benchmarks, classes):
        worst = ZERO
        for vec, b in zip(coll, bench):
            d = abs(b - sum((vec[x] for x in cls), ZERO))
            if d > worst:
                worst = d
        devs.append(worst)
    return devs


def adisc_eval(coloring: Coloring, D: DiscrepancyInstance) -> Fraction:
    if coloring.k != D.k:
        raise ColorCountMismatch(f"coloring uses k={coloring.k}, instance has k={D.k}")
    if coloring.m != D.m:
        raise DimensionMismatch(f"coloring covers {coloring.m} items, instance has {D.m}")
    return max(_color_deviations(D, coloring.classes), default=ZERO)


def _float_objective(D, assign):
    """Float discrepancy of a batch of colorings, shape (B, m) -> (B,)."""
    W = D.dense
    bench = W.sum(axis=2) / D.k
    out = np.zeros(assign.shape[0])
    if W.shape[1] == 0:
        return out
    for ell in range(D.k):
        mask = (assign == ell).astype(float)
        dev = np.abs(bench[ell][None, :] - mask @ W[ell].T).max(axis=1)
        np.maximum(out, dev, out=out)
    return out


def _exact_pick(D, candidates):
    """Exact minimum over candidate assignments; first one wins ties."""
    best = None
    for assign in candidates:
        col = Coloring(D.k, tuple(int(a) for a in assign))
        val = adisc_eval(col, D)
        if best is None or val < best[1]:
            best = (col, val)
            if val == 0:
                break
    return best


def solve(
    D: DiscrepancyInstance,
    strategy: str = "local_search",
    seed: int = 0,
    budget=None,
    initial: Coloring = None,
    target=None,
) -> SolveResult:
    """Find a low-discrepancy coloring.

    ``exhaustive`` enumerates all k^m colorings (``budget`` caps k^m) and is
    globally optimal.  ``random_restarts`` draws ``budget`` uniform colorings.
    ``local_search`` runs ``budget`` descents of single-item recolor moves,
    the first from ``initial`` when given; it stops early once the exact
    discrepancy is at most ``target``.
    """
    if strategy not in STRATEGIES:
        raise ValidationError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if D.k == 1 or D.m == 0:
        col = Coloring(D.k, (0,) * D.m)
        return SolveResult(col, adisc_eval(col, D), strategy)
    if strategy == "exhaustive":
        col, val = _exhaustive(D, budget)
    elif strategy == "random_restarts":
        col, val = _random_restarts(D, seed, _runs(strategy, budget))
    else:
        col, val = _local_search(D, seed, _runs(strategy, budget), initial, target)
    return SolveResult(col, val, strategy)


def _runs(strategy, budget):
    runs = DEFAULT_RUNS[strategy] if budget is None else int(budget)
    if runs < 1:
        raise ValidationError(f"{strategy} needs a positive budget, got {budget}")
    return runs


def _exhaustive(D, budget):
    k, m = D.k, D.m
    limit = resolve_budget(budget, EXHAUSTIVE_BUDGET)
    total = k**m
    if total > limit:
        raise BudgetExceeded(f"{k}^{m} = {total} colorings exceed the budget {limit}")
    powers = k ** np.arange(m - 1, -1, -1, dtype=np.int64)
    best = math.inf
    kept_idx, kept_val = [], []
    chunk = 1 << 14
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        obj = _float_objective(D, (idx[:, None] // powers[None, :]) % k)
        best = min(best, float(obj.min()))
        sel = obj <= best + _TOL
        kept_idx.append(idx[sel])
        kept_val.append(obj[sel])
    idx = np.concatenate(kept_idx)
    idx = idx[np.concatenate(kept_val) <= best + _TOL]
    return _exact_pick(D, ((i // powers) % k for i in idx))


def _random_restarts(D, seed, runs):
    children = np.random.SeedSequence(seed).spawn(runs)
    assign = np.stack([np.random.default_rng(c).integers(0, D.k, D.m) for c in children])
    obj = _float_objective(D, assign)
    low = float(obj.min())
    return _exact_pick(D, [assign[r] for r in range(runs) if obj[r] <= low + _TOL])


class _Descent:
    """Float state for single-item recolor descent on (max deviation, sum of squares)."""

    def __init__(self, D, assign):
        self.D = D
        self.W = D.dense
        self.bench = self.W.sum(axis=2) / D.k
        k, width, m = self.W.shape
        self.assign = np.array(assign, dtype=np.int64)
        self.C = np.zeros((k, width))
        for ell in range(k):
            self.C[ell] = self.W[ell][:, self.assign == ell].sum(axis=1)
        self.dev = np.zeros(k)
        self.sq = np.zeros(k)
        self.devR = np.zeros((k, m))
        self.devA = np.zeros((k, m))
        self.sqR = np.zeros((k, m))
        self.sqA = np.zeros((k, m))
        for ell in range(k):
            self._refresh(ell)

    def _refresh(self, ell):
        gap = self.bench[ell] - self.C[ell]
        Wl = self.W[ell]
        removed = gap[:, None] + Wl
        added = gap[:, None] - Wl
        self.dev[ell] = np.abs(gap).max(initial=0.0)
        self.sq[ell] = float(gap @ gap)
        self.devR[ell] = np.abs(removed).max(axis=0, initial=0.0)
        self.devA[ell] = np.abs(added).max(axis=0, initial=0.0)
        self.sqR[ell] = (removed * removed).sum(axis=0)
        self.sqA[ell] = (added * added).sum(axis=0)

    def move(self, x, b):
        a = int(self.assign[x])
        self.C[a] -= self.W[a][:, x]
        self.C[b] += self.W[b][:, x]
        self.assign[x] = b
        self._refresh(a)
        self._refresh(b)

    def best_move(self):
        k = self.dev.shape[0]
        m = self.assign.shape[0]
        items = np.arange(m)
        a = self.assign
        order = np.argsort(-self.dev, kind="stable")[:3]
        top = list(order) + [-1] * (3 - len(order))
        topv = [self.dev[t] if t >= 0 else 0.0 for t in top]
        bs = np.arange(k)[None, :]
        rest = np.full((m, k), topv[2])
        for t, tv in zip(reversed(top[:2]), reversed(topv[:2])):
            ok = (t != a[:, None]) & (t != bs)
            rest = np.where(ok, tv, rest)
        new_max = np.maximum(np.maximum(self.devR[a, items][:, None], self.devA.T), rest)
        total_sq = self.sq.sum()
        new_sq = total_sq - self.sq[a][:, None] - self.sq[None, :] + self.sqR[a, items][:, None] + self.sqA.T
        same = a[:, None] == bs
        new_max[same] = np.inf
        new_sq[same] = np.inf

        cur = self.dev.max()
        low = new_max.min()
        if low < cur - _TOL:
            pool = new_max <= low + _TOL
        else:
            pool = new_max <= cur + _TOL
            sq_tol = _TOL * max(1.0, total_sq)
            if not (pool & (new_sq < total_sq - sq_tol)).any():
                return None
        flat = int(np.argmin(np.where(pool, new_sq, np.inf)))
        return divmod(flat, k)


def _exact_improvement(D, assign):
    """Best single recolor move that strictly lowers the exact discrepancy, if any."""
    k = D.k
    classes = [[] for _ in range(k)]
    for x, a in enumerate(assign):
        classes[int(a)].append(x)
    sums = [
        [sum((vec[x] for x in cls), ZERO) for vec in coll] for coll, cls in zip(D.collections, classes)
    ]

    def color_dev(ell, delta_item=None, sign=0):
        worst = ZERO
        for vec, b, s in zip(D.collections[ell], D.benchmarks[ell], sums[ell]):
            if sign:
                s = s + sign * vec[delta_item]
            d = abs(b - s)
            if d > worst:
                worst = d
        return worst

    devs = [color_dev(ell) for ell in range(k)]
    top = max(devs)
    hot = {ell for ell in range(k) if devs[ell] == top}
    if top == 0 or len(hot) > 2:
        return None
    best = None
    for x, a in enumerate(assign):
        a = int(a)
        for b in range(k):
            if b == a or not hot <= {a, b}:
                continue
            others = max((devs[c] for c in range(k) if c not in (a, b)), default=ZERO)
            val = max(others, color_dev(a, x, -1), color_dev(b, x, +1))
            if val < top and (best is None or val < best[0]):
                best = (val, x, b)
    return None if best is None else best[1:]


def _descend(D, assign, max_rounds=50):
    state = _Descent(D, assign)
    limit = 50 * D.m * D.k + 1000
    for _ in range(max_rounds):
        for _ in range(limit):
            mv = state.best_move()
            if mv is None:
                break
            state.move(*mv)
        fix = _exact_improvement(D, state.assign)
        if fix is None:
            break
        state.move(*fix)
    return state.assign


def _local_search(D, seed, runs, initial, target):
    if initial is not None and (initial.k != D.k or initial.m != D.m):
        raise ColorCountMismatch("initial coloring does not match the instance")
    children = np.random.SeedSequence(seed).spawn(runs)
    target = None if target is None else to_rational(target)
    best = None
    for r, child in enumerate(children):
        if r == 0 and initial is not None:
            start = np.array(initial.assignment, dtype=np.int64)
        else:
            start = np.random.default_rng(child).integers(0, D.k, D.m)
        col = Coloring(D.k, tuple(int(a) for a in _descend(D, start)))
        val = adisc_eval(col, D)
        if best is None or val < best[1]:
            best = (col, val)
        if best[1] == 0 or (target is not None and best[1] <= target):
            break
    return best


def wdisc_brute(V: Sequence[Sequence], p, budget=None):
    """Exact min over subsets A of max_i |p*v_i(M) - v_i(A)|, with an argmin subset.

    Items whose value columns coincide are interchangeable, so the search runs
    over how many items of each distinct column are taken; ``budget`` caps the
    number of such count vectors.  The argmin takes the lowest-indexed items
    of each column type.
    """
    p = to_rational(p)
    if not 0 < p < 1:
        raise ValidationError(f"p must lie in (0, 1), got {p}")
    V = [tuple(to_rational(x) for x in vec) for vec in V]
    if not V:
        return ZERO, ()
    m = len(V[0])
    if any(len(vec) != m for vec in V):
        raise DimensionMismatch("valuation vectors differ in length")

    groups = {}
    for x in range(m):
        groups.setdefault(tuple(vec[x] for vec in V), []).append(x)
    types = list(groups.items())
    radix = [len(members) + 1 for _, members in types]
    states = math.prod(radix)
    limit = resolve_budget(budget, WDISC_BUDGET)
    if states > limit:
        raise BudgetExceeded(f"{states} subset classes exceed the budget {limit}")

    scale = math.lcm(p.denominator, *(q.denominator for vec in V for q in vec))
    U = [[int(q * scale) for q in vec] for vec in V]
    a, b = p.numerator, p.denominator
    # |p v(M) - v(A)| = |a U(M) - b U(A)| / (b * scale)
    totals = [a * sum(u) for u in U]
    col = [[U[i][members[0]] for i in range(len(V))] for _, members in types]
    big = max(abs(t) for t in totals) + b * max((abs(x) for u in U for x in u), default=0) * m
    exact_ints = big >= 2**62

    best_num, best_counts = None, None
    if exact_ints:
        for counts in itertools.product(*(range(r) for r in radix)):
            num = max(abs(totals[i] - b * sum(c * col[t][i] for t, c in enumerate(counts))) for i in range(len(V)))
            if best_num is None or num < best_num:
                best_num, best_counts = num, counts
    else:
        cols = np.array(col, dtype=np.int64)
        tot = np.array(totals, dtype=np.int64)
        weights = np.array([math.prod(radix[t + 1 :]) for t in range(len(radix))], dtype=np.int64)
        radix_arr = np.array(radix, dtype=np.int64)
        chunk = 1 << 16
        for start in range(0, states, chunk):
            idx = np.arange(start, min(start + chunk, states), dtype=np.int64)
            counts = (idx[:, None] // weights[None, :]) % radix_arr[None, :]
            num = np.abs(tot[None, :] - b * (counts @ cols)).max(axis=1)
            pos = int(np.argmin(num))
            if best_num is None or int(num[pos]) < best_num:
                best_num, best_counts = int(num[pos]), tuple(int(c) for c in counts[pos])
            if best_num == 0:
                break
    subset = sorted(x for (_, members), c in zip(types, best_counts) for x in members[:c])
    return Fraction(best_num, b * scale), tuple(subset)
