import pytest
from hypothesis import given, strategies as st

from ctdlab.sets import (
    Family,
    ObModel,
    StateSet,
    WorldMismatchError,
    all_tables,
    enumerate_subsets,
    model_add,
    model_from_function,
    model_get,
    subsets,
    supersets,
)
from ctdlab.zoo import no_obligations


def S(n, *ws):
    return StateSet.of(n, ws)


def test_intersection():
    assert S(3, 0, 1) & S(3, 1, 2) == S(3, 1)


def test_difference_with_self_is_empty():
    x = S(3, 0, 2)
    assert x - x == StateSet.empty(3)


def test_complement_of_empty():
    assert ~StateSet.empty(3) == S(3, 0, 1, 2)


def test_mismatched_world_counts_raise():
    with pytest.raises(WorldMismatchError):
        S(2, 0) | S(3, 0)


def test_out_of_range_world():
    with pytest.raises(ValueError):
        S(2, 2)


def test_enumerate_subsets_examples():
    assert list(enumerate_subsets(StateSet.empty(3))) == [StateSet.empty(3)]
    assert list(enumerate_subsets(S(3, 0, 2))) == [S(3), S(3, 0), S(3, 2), S(3, 0, 2)]
    assert len(list(enumerate_subsets(S(3, 0, 1, 2)))) == 8


def test_model_get_no_obligations():
    m = no_obligations(3)
    for x in range(8):
        assert not model_get(m, x)


def test_model_add_is_persistent():
    m = ObModel.empty(2)
    m2 = model_add(m, S(2, 0), S(2, 0))
    assert not m.has(1, 1)
    assert m2.has(S(2, 0), S(2, 0))
    assert m <= m2 and not m2 <= m


def test_family_membership():
    fam = Family.of(2, [S(2, 0), 3])
    assert S(2, 0) in fam and S(2, 0, 1) in fam and S(2, 1) not in fam
    assert len(fam) == 2


def test_all_tables_is_lexicographic():
    tables = list(all_tables(1))
    assert len(tables) == 16
    assert tables == sorted(tables)
    assert tables[0] == (0, 0) and tables[1] == (0, 1)


def test_model_from_function_roundtrip():
    m = model_from_function(2, lambda x, y: x & y != 0)
    assert all(m.has(x, y) == bool(x & y) for x in range(4) for y in range(4))


ns = st.integers(min_value=0, max_value=5)


@st.composite
def set_pairs(draw):
    n = draw(ns)
    a = draw(st.integers(0, (1 << n) - 1))
    b = draw(st.integers(0, (1 << n) - 1))
    c = draw(st.integers(0, (1 << n) - 1))
    return StateSet(a, n), StateSet(b, n), StateSet(c, n)


@given(set_pairs())
def test_boolean_algebra_laws(abc):
    a, b, c = abc
    assert a & (b | c) == (a & b) | (a & c)
    assert ~(a | b) == ~a & ~b
    assert ~~a == a
    assert a - b == a & ~b
    assert (a & b) <= a <= (a | b)
    assert (a <= b) == (a & b == a)


@given(set_pairs())
def test_encoding_matches_members(abc):
    a, _, _ = abc
    assert a.bits == sum(1 << w for w in a)
    assert len(a) == len(list(a))


@given(st.integers(0, 63), st.integers(0, 6))
def test_subsets_and_supersets(base, n):
    base &= (1 << n) - 1
    subs = list(subsets(base))
    assert subs == sorted(subs)
    assert len(subs) == 2 ** bin(base).count("1")
    assert all(s & ~base == 0 for s in subs)
    sups = list(supersets(base, n))
    assert len(sups) == 2 ** (n - bin(base).count("1"))
    assert all(base & ~s == 0 for s in sups)
