import numpy as np
import pytest

from fdx.errors import NotPowerOfTwo
from fdx.generators import (
    HyperedgeSets,
    lb_asym_instance,
    mm_sets,
    random_instance,
    star_extern_instance,
    sylvester_hadamard,
)
from fdx.reductions import to_asym


def test_hadamard_small_orders():
    assert sylvester_hadamard(1).tolist() == [[1]]
    assert sylvester_hadamard(2).tolist() == [[1, 1], [1, -1]]


@pytest.mark.parametrize("order", [4, 8, 16])
def test_hadamard_orthogonal(order):
    H = sylvester_hadamard(order)
    assert set(np.unique(H)) == {-1, 1}
    assert (H @ H.T == order * np.eye(order, dtype=int)).all()


@pytest.mark.parametrize("bad", [0, 3, 6, -4])
def test_hadamard_rejects_non_powers(bad):
    with pytest.raises(NotPowerOfTwo):
        sylvester_hadamard(bad)


def test_mm_sets_examples():
    s = mm_sets(2, 1)
    assert s.sets == (frozenset({0, 1}), frozenset({0}))
    assert mm_sets(1, 3).sets == (frozenset({0, 1, 2}),)
    s = mm_sets(4, 2)
    assert s.m == 8 and len(s.sets[0]) == 8
    assert all(len(t) == 4 for t in s.sets[1:])
    assert mm_sets(4).m == 32
    with pytest.raises(NotPowerOfTwo):
        mm_sets(3, 1)


def test_lb_asym_single_set():
    sets = HyperedgeSets(1, 3, (frozenset(range(3)),))
    J = lb_asym_instance(sets)
    assert J.n == 3 and J.is_binary
    ones, zeros = (1, 1, 1), (0, 0, 0)
    assert J.values[0][1] == J.values[0][2] == ones
    assert J.values[1][0] == ones and J.values[1][2] == zeros
    assert J.values[2][0] == zeros and J.values[2][1] == ones


@pytest.mark.parametrize("q,r", [(1, 2), (2, 1), (2, 3), (4, 1)])
def test_lb_asym_shape(q, r):
    J = lb_asym_instance(mm_sets(q, r))
    assert J.n == 2 * q + 1 and J.is_binary and J.has_no_chores


def test_star_examples():
    sets = mm_sets(2, 1)  # S_0 = {0, 1}, S_1 = {0}
    I = star_extern_instance(sets)
    V = I.values
    # agent 1 watches S_0; item 0 is inside it
    assert V[1][0][0] == -1 and all(V[1][j][0] == 0 for j in range(1, 5))
    # agent 3 watches S_1; item 1 is in its complement
    assert V[3][0][1] == 1 and V[3][3][1] == 1
    assert all(V[3][j][1] == 0 for j in (1, 2, 4))


@pytest.mark.parametrize("q,r", [(1, 1), (2, 1), (2, 2), (4, 1)])
def test_star_round_trip_and_structure(q, r):
    sets = mm_sets(q, r)
    I = star_extern_instance(sets)
    assert to_asym(I) == lb_asym_instance(sets)
    for i in range(1, I.n):
        for j in range(1, I.n):
            if j != i:
                assert all(x == 0 for x in I.values[i][j])


def test_random_flags_and_determinism():
    a = random_instance(3, 5, binary=True, no_chores=True, seed=7)
    assert a.is_binary and a.has_no_chores
    assert a == random_instance(3, 5, binary=True, no_chores=True, seed=7)
    assert random_instance(2, 0, seed=1).m == 0
    J = random_instance(3, 6, model="asym", no_chores=True, seed=2)
    assert J.has_no_chores
    assert random_instance(4, 6, no_chores=True, seed=3).has_no_chores
