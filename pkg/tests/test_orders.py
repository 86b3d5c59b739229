from __future__ import annotations

import itertools
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dilators.errors import BoundExceeded, NotIncreasing, SlotMismatch
from dilators.orders import (
    ArityDiagram,
    FiniteOrder,
    IncreasingMap,
    Ordering,
    diag,
    diag_pair,
    enum_arity_diagrams,
    enumerate_increasing,
    is_prefix,
    kb_compare,
    seq_at,
    seq_index,
)

from strategies import nat_sequences


def test_enumeration_starts_with_short_small_sequences():
    assert [seq_at(i) for i in range(8)] == [(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1), (2,)]


@given(st.integers(0, 5000))
def test_index_inverts_enumeration(i):
    assert seq_index(seq_at(i)) == i


@given(nat_sequences(max_len=6, max_value=6))
def test_enumeration_inverts_index(s):
    assert seq_at(seq_index(s)) == s


@given(nat_sequences(max_len=6, max_value=6))
def test_prefixes_are_enumerated_first(s):
    for k in range(len(s)):
        assert seq_index(s[:k]) < seq_index(s)


def test_enumeration_is_injective_on_an_initial_block():
    seqs = [seq_at(i) for i in range(2000)]
    assert len(set(seqs)) == len(seqs)


def test_negative_inputs_are_rejected():
    with pytest.raises(ValueError):
        seq_at(-1)
    with pytest.raises(ValueError):
        seq_index((0, -1))


def test_kb_proper_extension_is_smaller():
    assert kb_compare([0, 1], [0]) == Ordering.LESS
    assert kb_compare([0], [0, 1]) == Ordering.GREATER
    assert kb_compare([0, 5], [1]) == Ordering.LESS
    assert kb_compare([], []) == Ordering.EQUAL


@given(nat_sequences(), nat_sequences())
def test_kb_is_antisymmetric(a, b):
    assert kb_compare(a, b) == -kb_compare(b, a)
    assert (kb_compare(a, b) == Ordering.EQUAL) == (a == b)


@given(nat_sequences(), nat_sequences(), nat_sequences())
def test_kb_is_transitive(a, b, c):
    if kb_compare(a, b) == Ordering.LESS and kb_compare(b, c) == Ordering.LESS:
        assert kb_compare(a, c) == Ordering.LESS


def test_kb_with_slots():
    num = lambda x, y: (x > y) - (x < y)  # noqa: E731
    cmps = {"n": num, "r": lambda x, y: -num(x, y)}
    assert kb_compare([("n", 0), ("r", 1)], [("n", 0), ("r", 2)], cmps) == Ordering.GREATER
    with pytest.raises(SlotMismatch):
        kb_compare([("n", 0)], [("r", 0)], cmps)


def test_is_prefix():
    assert is_prefix((), (1,))
    assert is_prefix((1, 2), (1, 2, 3))
    assert not is_prefix((2,), (1, 2))


def diagram_count(n0: int, n1: int) -> int:
    # choose the join size n, the image of e0, then which of its points e1 also hits
    return sum(comb(n, n0) * comb(n0, n0 + n1 - n) for n in range(max(n0, n1), n0 + n1 + 1))


@pytest.mark.parametrize("n0, n1", list(itertools.product(range(5), repeat=2)))
def test_diagram_enumeration_matches_count(n0, n1):
    ds = enum_arity_diagrams(n0, n1)
    assert len(ds) == diagram_count(n0, n1)
    assert len({d.realize() for d in ds}) == len(ds)
    for d in ds:
        assert d.e0.image() | d.e1.image() == frozenset(range(d.n_join))


def test_small_diagram_counts():
    assert len(enum_arity_diagrams(0, 0)) == 1
    assert len(enum_arity_diagrams(1, 1)) == 3
    assert len(enum_arity_diagrams(2, 1)) == 5


def test_diagram_bound():
    with pytest.raises(BoundExceeded):
        enum_arity_diagrams(7, 1)
    assert enum_arity_diagrams(7, 0, bound=7)


@given(st.sets(st.integers(0, 8)), st.sets(st.integers(0, 8)))
def test_diag_pair_round_trip(a, b):
    d = diag_pair(a, b)
    ra, rb = d.realize()
    union = sorted(a | b)
    assert [union[i] for i in ra] == sorted(a)
    assert [union[i] for i in rb] == sorted(b)
    assert -(-d) == d
    assert d.n_meet == len(a & b)


def test_meet_maps_pick_the_shared_points():
    d = ArityDiagram.of((0, 2), (1, 2))
    leg0, leg1 = d.meet_maps
    assert leg0.values == (1,) and leg1.values == (1,)


def test_diagram_legs_must_cover():
    with pytest.raises(ValueError):
        ArityDiagram(IncreasingMap(1, 3, (0,)), IncreasingMap(1, 3, (2,)))


def test_diag_on_a_carrier():
    carrier = FiniteOrder(["c", "a", "b"])
    ds = diag(carrier, [{"c", "b"}, {"a"}])
    assert ds[(0, 1)].realize() == ((0, 2), (1,))


def test_finite_order_basics():
    o = FiniteOrder(["x", "y", "z"])
    assert o.less("x", "z") and not o.less("z", "y")
    assert o.compare("y", "y") == Ordering.EQUAL
    assert len(o) == 3 and "y" in o
    assert list(FiniteOrder.initial(3)) == [0, 1, 2]


def test_increasing_maps():
    f = IncreasingMap.of((0, 2), 3)
    g = IncreasingMap.of((1, 3, 4), 5)
    assert g.compose(f).values == (1, 4)
    assert IncreasingMap.identity(3).values == (0, 1, 2)
    with pytest.raises(NotIncreasing):
        IncreasingMap(2, 3, (2, 1))
    with pytest.raises(NotIncreasing):
        g.compose(IncreasingMap.of((0,), 4))


@pytest.mark.parametrize("n, m", [(0, 0), (0, 3), (2, 4), (3, 3), (4, 2)])
def test_increasing_map_enumeration_count(n, m):
    assert sum(1 for _ in enumerate_increasing(n, m)) == comb(m, n)
