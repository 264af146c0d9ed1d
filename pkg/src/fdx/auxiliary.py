"""Auxiliary [0, 1]-valued valuations that turn balanced colorings into discard bounds.

For a mixed-sign additive valuation ``v``, a color count ``k`` and a threshold
``T``, the ``L = min(m, 6*T*k)`` items of largest ``|v|`` are "large".  Four
surrogate valuations track large goods, large chores, and the scaled small
goods and chores.  If two disjoint sets are each within ``T`` of the
proportional share ``1/k`` on all four surrogates, discarding the large goods
of the envied set and the large chores of the envious set (at most ``14*T``
items) removes the envy.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import AssumptionViolated, OverlappingBundles, ValidationError
from .model import ONE, ZERO, to_rational


@dataclass(frozen=True)
class AuxBundle:
    v: tuple
    k: int
    T: int
    L: int
    S: frozenset
    S_plus: frozenset
    S_minus: frozenset
    R: frozenset
    R_plus: frozenset
    R_minus: frozenset
    p: Fraction
    v1: tuple
    v2: tuple
    v3: tuple
    v4: tuple

    @property
    def m(self) -> int:
        return len(self.v)

    @property
    def vectors(self) -> tuple:
        return (self.v1, self.v2, self.v3, self.v4)


def build_aux(v: Sequence, k: int, T: int) -> AuxBundle:
    if k < 1 or T < 1:
        raise ValidationError(f"need k >= 1 and T >= 1, got k={k}, T={T}")
    v = tuple(to_rational(x) for x in v)
    m = len(v)
    L = min(m, 6 * T * k)
    by_size = sorted(range(m), key=lambda x: (-abs(v[x]), x))
    S = frozenset(by_size[:L])
    R = frozenset(by_size[L:])
    S_plus = frozenset(x for x in S if v[x] > 0)
    S_minus = frozenset(x for x in S if v[x] < 0)
    R_plus = frozenset(x for x in R if v[x] > 0)
    R_minus = frozenset(x for x in R if v[x] < 0)
    p = min((abs(v[x]) for x in S), default=ZERO)

    v1 = tuple(ONE if x in S_plus else ZERO for x in range(m))
    v2 = tuple(ONE if x in S_minus else ZERO for x in range(m))
    if p > 0:
        v3 = tuple(v[x] / p if x in R_plus else ZERO for x in range(m))
        v4 = tuple(-v[x] / p if x in R_minus else ZERO for x in range(m))
    else:
        v3 = v4 = (ZERO,) * m
    return AuxBundle(v, k, T, L, S, S_plus, S_minus, R, R_plus, R_minus, p, v1, v2, v3, v4)


def proportional_deviation(vec: Sequence[Fraction], k: int, X) -> Fraction:
    """|vec(M)/k - vec(X)|."""
    return abs(sum(vec, ZERO) / k - sum((vec[x] for x in X), ZERO))


def assumption_check(bundle: AuxBundle, X) -> bool:
    """Whether X is within T of the proportional share on all four surrogates."""
    X = tuple(X)
    return all(proportional_deviation(vec, bundle.k, X) <= bundle.T for vec in bundle.vectors)


def witness_discards(bundle: AuxBundle, A, B, check: bool = True):
    """Discard sets (P, Q) = (B ∩ S+, A ∩ S-) that cure A's envy toward B.

    With ``check`` the balance precondition is re-verified on both sets and
    :class:`AssumptionViolated` is raised when it fails.
    """
    A, B = frozenset(A), frozenset(B)
    if A & B:
        raise OverlappingBundles(f"items {sorted(A & B)} appear in both sets")
    if check:
        for name, X in (("A", A), ("B", B)):
            if not assumption_check(bundle, X):
                raise AssumptionViolated(f"set {name} is more than T={bundle.T} from the proportional share")
    return B & bundle.S_plus, A & bundle.S_minus
