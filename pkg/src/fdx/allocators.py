"""Allocation pipelines built on balanced colorings.

Both pipelines pick a threshold ``T`` by doubling: build the auxiliary
valuations for ``T``, ask a discrepancy solver for a coloring, and accept it
once its exact discrepancy is at most ``T``.  Every ordered pair (or bundle
pair, for the consensus variant) can then be made envy-free by discarding at
most ``14*T`` items.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .auxiliary import build_aux
from .discrepancy import DiscrepancyInstance, solve
from .envy import EfcCertificate, certify_efc, min_discard_pair
from .errors import ValidationError
from .model import ZERO, Allocation, AsymInstance, ExternInstance, to_rational
from .reductions import to_asym


@dataclass(frozen=True)
class SolverConfig:
    strategy: str = "local_search"
    seed: int = 0
    budget: int = None

    def to_json(self) -> dict:
        return {"strategy": self.strategy, "seed": self.seed, "budget": self.budget}


@dataclass(frozen=True)
class AllocationResult:
    allocation: Allocation
    t_final: int
    certified_bound: int
    achieved: Fraction
    certificate: EfcCertificate
    permutation: tuple = field(default=None)

    @property
    def measured_c(self) -> int:
        return self.certificate.c


@dataclass(frozen=True)
class ConsensusResult:
    bundles: tuple
    t_final: int
    certified_bound: int
    achieved: Fraction


def _doubling(build, config: SolverConfig, m: int):
    """Smallest T in 1, 2, 4, ... whose discrepancy instance the solver balances to within T."""
    T = 1
    while True:
        D = build(T)
        result = solve(D, config.strategy, seed=config.seed, budget=config.budget, target=T)
        if result.achieved <= T:
            return T, result
        if T >= max(m, 1):
            # every deviation is at most v(M) <= m, so this cannot happen
            raise AssertionError(f"solver returned {result.achieved} > T = {T} >= m = {m}")
        T *= 2


def nonconsensus_instance(J: AsymInstance, T: int) -> DiscrepancyInstance:
    """Color l carries the four surrogates of every v_{l,j} and every v_{j,l}."""
    n = J.n
    aux = {(i, j): build_aux(J.values[i][j], n, T).vectors for i, j in J.pairs()}
    collections = []
    for ell in range(n):
        coll = []
        for j in range(n):
            if j != ell:
                coll.extend(aux[ell, j])
        for j in range(n):
            if j != ell:
                coll.extend(aux[j, ell])
        collections.append(tuple(coll))
    return DiscrepancyInstance(n, J.m, tuple(collections))


def allocate_nonconsensus(J: AsymInstance, config: SolverConfig = SolverConfig()) -> AllocationResult:
    T, result = _doubling(lambda T: nonconsensus_instance(J, T), config, J.m)
    alloc = result.coloring.to_allocation()
    cert = certify_efc(J, alloc)
    return AllocationResult(alloc, T, 14 * T, result.achieved, cert)


def allocate_extern(instance: ExternInstance, config: SolverConfig = SolverConfig()) -> AllocationResult:
    return allocate_nonconsensus(to_asym(instance), config)


def consensus_instance(vs: Sequence[Sequence], k: int, T: int, m: int) -> DiscrepancyInstance:
    shared = []
    for v in vs:
        shared.extend(build_aux(v, k, T).vectors)
    shared = tuple(shared)
    return DiscrepancyInstance(k, m, (shared,) * k)


def consensus_partition(vs: Sequence[Sequence], k: int, config: SolverConfig = SolverConfig(), m: int = None):
    """Partition into k bundles balanced for every valuation in ``vs`` simultaneously.

    ``m`` is needed only when ``vs`` is empty.
    """
    if k < 1:
        raise ValidationError("need k >= 1 bundles")
    vs = [tuple(to_rational(x) for x in v) for v in vs]
    if vs:
        m = len(vs[0])
        if any(len(v) != m for v in vs):
            raise ValidationError("valuation vectors differ in length")
    elif m is None:
        raise ValidationError("m is required when there are no valuations")
    T, result = _doubling(lambda T: consensus_instance(vs, k, T, m), config, m)
    return ConsensusResult(result.coloring.classes, T, 14 * T, result.achieved)


def consensus_max_discard(vs: Sequence[Sequence], bundles) -> int:
    """Largest min_discard_pair count over all valuations and ordered bundle pairs."""
    worst = 0
    for v in vs:
        v = tuple(to_rational(x) for x in v)
        for a, A in enumerate(bundles):
            for b, B in enumerate(bundles):
                if a != b:
                    worst = max(worst, min_discard_pair(v, A, B)[0])
    return worst


def assign_bundles(bundles, permutation, m) -> Allocation:
    """Agent ``a`` receives ``bundles[permutation[a]]``."""
    return Allocation.from_bundles([bundles[b] for b in permutation], m)


def truthful_allocate(
    instance: ExternInstance, seed: int = 0, config: SolverConfig = SolverConfig()
) -> AllocationResult:
    """Consensus partition over all pairwise envy valuations, handed out by a uniform random bijection.

    An AsymInstance is accepted as well and used as is.
    """
    J = instance if isinstance(instance, AsymInstance) else to_asym(instance)
    n = J.n
    vs = [J.values[i][j] for i, j in J.pairs()]
    part = consensus_partition(vs, n, config, m=J.m)
    perm = tuple(int(b) for b in np.random.default_rng(seed).permutation(n))
    alloc = assign_bundles(part.bundles, perm, J.m)
    return AllocationResult(alloc, part.t_final, part.certified_bound, part.achieved, certify_efc(J, alloc), perm)


def consensus_allocate(instance, config: SolverConfig = SolverConfig()) -> AllocationResult:
    """Consensus partition with bundle l handed to agent l."""
    J = instance if isinstance(instance, AsymInstance) else to_asym(instance)
    vs = [J.values[i][j] for i, j in J.pairs()]
    part = consensus_partition(vs, J.n, config, m=J.m)
    alloc = assign_bundles(part.bundles, range(J.n), J.m)
    return AllocationResult(alloc, part.t_final, part.certified_bound, part.achieved, certify_efc(J, alloc))


METHODS = ("nonconsensus", "consensus", "truthful")


def run_method(instance, method: str, config: SolverConfig = SolverConfig(), seed: int = 0) -> AllocationResult:
    """Dispatch used by the CLI; accepts either model."""
    if method == "nonconsensus":
        J = instance if isinstance(instance, AsymInstance) else to_asym(instance)
        return allocate_nonconsensus(J, config)
    if method == "consensus":
        return consensus_allocate(instance, config)
    if method == "truthful":
        return truthful_allocate(instance, seed, config)
    raise ValidationError(f"unknown method {method!r}; choose from {METHODS}")


def expected_utilities(instance: ExternInstance) -> list:
    """(1/n) * sum over items and recipients of V_i(j, x), for every agent i."""
    n = instance.n
    return [
        sum((x for row in instance.values[i] for x in row), ZERO) / n for i in range(n)
    ]
