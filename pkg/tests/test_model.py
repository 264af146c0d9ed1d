import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fdx.errors import DiagonalPresent, DimensionMismatch, InvalidAllocation, NonRational, SameAgent
from fdx.model import (
    Allocation,
    AsymInstance,
    Coloring,
    ExternInstance,
    allocation_value,
    swap_bundles,
    to_rational,
    validate,
)

values = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@st.composite
def extern_instances(draw, max_n=3, max_m=4, elems=values):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    table = draw(
        st.lists(
            st.lists(st.lists(elems, min_size=m, max_size=m), min_size=n, max_size=n), min_size=n, max_size=n
        )
    )
    return ExternInstance(n, table)


def test_empty_instance_is_valid():
    inst = validate({"model": "externalities", "n": 1, "values": [[[]]]})
    assert inst.m == 0
    assert inst.is_binary and inst.has_no_chores


def test_two_agent_binary_no_chores():
    inst = ExternInstance(2, [[[1], [0]], [[0], [1]]])
    assert inst.is_binary and inst.has_no_chores


def test_three_rows_for_two_agents():
    with pytest.raises(DimensionMismatch):
        validate({"model": "externalities", "n": 2, "values": [[[1], [0]], [[0], [1]], [[0], [1]]]})


def test_ragged_item_vector():
    with pytest.raises(DimensionMismatch):
        ExternInstance(2, [[[1, 2], [0]], [[0, 1], [1, 1]]])


def test_rational_parsing():
    assert to_rational("3/6") == Fraction(1, 2)
    assert to_rational(-2) == -2
    for bad in ("abc", 0.5, True, None, "1/0"):
        with pytest.raises(NonRational):
            to_rational(bad)


def test_asym_diagonal_must_be_null():
    with pytest.raises(DiagonalPresent):
        validate({"model": "asym", "n": 2, "values": [[[1], [1]], [[1], None]]})
    inst = validate({"model": "asym", "n": 2, "values": [[None, ["1/2"]], [[-1], None]]})
    assert inst.values[0][1] == (Fraction(1, 2),)
    assert not inst.has_no_chores and not inst.is_binary


def test_allocation_value_examples():
    empty = ExternInstance(2, [[[], []], [[], []]])
    assert allocation_value(empty, Allocation(2, ()), 0) == 0
    one = ExternInstance(2, [[[3], [1]], [[0], [0]]])
    assert allocation_value(one, Allocation(2, (1,)), 0) == 1
    two = ExternInstance(2, [[[2, 2], [0, 1]], [[0, 0], [0, 0]]])
    assert allocation_value(two, Allocation.from_bundles([[0], [1]], 2), 0) == 3


def test_allocation_from_bundles_rejects_bad_partitions():
    with pytest.raises(InvalidAllocation):
        Allocation.from_bundles([[0], [0, 1]], 2)
    with pytest.raises(InvalidAllocation):
        Allocation.from_bundles([[0], []], 2)
    with pytest.raises(InvalidAllocation):
        Allocation(2, (0, 2))


def test_swap_examples():
    A = Allocation.from_bundles([[0], []], 1)
    assert swap_bundles(A, 0, 1).bundles == ((), (0,))
    B = Allocation(3, (0, 1, 2, 2, 0))
    assert swap_bundles(B, 0, 1).bundle(2) == B.bundle(2)
    with pytest.raises(SameAgent):
        swap_bundles(B, 1, 1)


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(0, n - 1), max_size=8))),
       st.data())
def test_swap_is_involution(na, data):
    n, assignment = na
    A = Allocation(n, tuple(assignment))
    i, j = data.draw(st.sampled_from([(i, j) for i in range(n) for j in range(n) if i != j]))
    once = swap_bundles(A, i, j)
    assert once.m == A.m
    assert swap_bundles(once, i, j) == A


@given(extern_instances())
def test_flags_match_exhaustive_scan(inst):
    n, m = inst.n, inst.m
    binary = True
    no_chores = True
    for i, j, x in itertools.product(range(n), range(n), range(m)):
        binary &= inst.values[i][j][x] in (0, 1)
        no_chores &= inst.values[i][i][x] >= inst.values[i][j][x]
    assert inst.is_binary == binary
    assert inst.has_no_chores == no_chores


@settings(max_examples=50)
@given(extern_instances(), st.data())
def test_allocation_value_is_itemwise_sum(inst, data):
    owners = data.draw(st.lists(st.integers(0, inst.n - 1), min_size=inst.m, max_size=inst.m))
    A = Allocation(inst.n, tuple(owners))
    for i in range(inst.n):
        by_bundle = sum(inst.values[i][j][x] for j, bundle in enumerate(A.bundles) for x in bundle)
        assert allocation_value(inst, A, i) == by_bundle


def test_coloring_classes():
    col = Coloring(3, (2, 0, 2))
    assert col.classes == ((1,), (), (0, 2))
    assert col.to_allocation().bundles == col.classes


def test_instances_are_immutable():
    inst = ExternInstance(1, [[[1]]])
    with pytest.raises(Exception):
        inst.n = 2
    assert isinstance(AsymInstance(1, [[None]]).values, tuple)
