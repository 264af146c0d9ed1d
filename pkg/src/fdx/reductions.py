"""Translation between the externalities model and the asymmetric envy model.

``to_asym`` maps an externalities instance to pairwise envy valuations
``v_{i,j}(x) = V_i(i,x) - V_i(j,x)``; the two lifts go back the other way
with ``V_i(i,x) = 1`` and ``V_i(j,x) = 1 - v_{i,j}(x)``.
"""

from .errors import NotBinary
from .model import ONE, AsymInstance, ExternInstance


def to_asym(instance: ExternInstance) -> AsymInstance:
    n, m = instance.n, instance.m
    V = instance.values
    table = [
        [None if j == i else tuple(V[i][i][x] - V[i][j][x] for x in range(m)) for j in range(n)]
        for i in range(n)
    ]
    return AsymInstance(n, table, instance.items)


def lift_additive(instance: AsymInstance) -> ExternInstance:
    n, m = instance.n, instance.m
    v = instance.values
    table = [
        [(ONE,) * m if j == i else tuple(ONE - v[i][j][x] for x in range(m)) for j in range(n)]
        for i in range(n)
    ]
    return ExternInstance(n, table, instance.items)


def lift_binary(instance: AsymInstance) -> ExternInstance:
    """Same construction as ``lift_additive``; on binary input the result is binary with no chores."""
    if not instance.is_binary:
        raise NotBinary("lift_binary needs every v_{i,j}(x) in {0, 1}")
    return lift_additive(instance)
