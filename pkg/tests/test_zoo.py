import pytest

import oracle
from ctdlab.axioms import PRESETS, satisfies
from ctdlab.sets import Family, StateSet, full
from ctdlab.zoo import (
    AVOID_NONE,
    NO_OBLIGATIONS,
    NOT_CJ97,
    AvoidOnly,
    avoid_none,
    avoid_only,
    bad_worlds,
    canon2,
    canon2_II,
    classify,
    classify_checked,
    is_bad,
    is_cosubsingleton,
    is_quasibad,
    is_subsingleton,
    no_obligations,
    ought,
)


def fam(n, *sets):
    return Family.of(n, sets)


def test_ought_on_empty_model_fails():
    assert not ought(no_obligations(2), 0b01, 0b11)


def test_ought_vacuous_given_empty():
    for a in range(4):
        assert ought(no_obligations(2), a, 0)


def test_ought_in_canon2_ii_at_five_worlds():
    assert ought(canon2_II(5, 0b00001, 0b00101), 0b00001, full(5))


def test_ought_matches_definition():
    for n in range(1, 4):
        for a in range(1, 1 << n):
            for b in range(1, 1 << n):
                m = canon2(n, a, b)
                for p in range(1 << n):
                    for q in range(1 << n):
                        assert ought(m, p, q) == oracle.ought(m.table, p, q)


def test_canon2_examples():
    m = canon2(2, 0b01, 0b10)
    assert m.get(0b11) == fam(2, 0b01, 0b11)
    assert m.get(0b10) == fam(2, 0b10, 0b11)
    assert not m.get(0)


def test_canon2_ii_examples():
    assert canon2_II(3, 0b001, 0b010).get(0b110) == fam(3, 0b010, 0b011)
    assert canon2_II(2, 0b01, 0b10).get(0b11) == fam(2, 0b01)


@pytest.mark.parametrize("ctor", [canon2, canon2_II])
def test_contexts_missing_b_are_empty(ctor):
    n, a, b = 3, 0b001, 0b011
    m = ctor(n, a, b)
    for x in range(8):
        if not x & b:
            assert not m.get(x)


def test_branch_orders_agree_when_a_inside_b():
    for n in range(1, 4):
        for a in range(1, 1 << n):
            for b in range(1, 1 << n):
                if a & ~b == 0:
                    assert canon2(n, a, b) == canon2(n, a, b, order="a_first")
                    assert canon2_II(n, a, b) == canon2_II(n, a, b, order="a_first")


def test_bad_order_rejected():
    with pytest.raises(ValueError):
        canon2(2, 1, 2, order="b_first")


def test_avoid_only_example():
    assert avoid_only(2, 0).get(0b11) == fam(2, 0b10, 0b11)


def test_avoid_none_empty_context():
    for n in range(4):
        assert not avoid_none(n).get(0)


def test_bad_and_quasibad():
    assert is_bad(avoid_only(3, 0), 0)
    assert bad_worlds(avoid_only(3, 0)) == [0]
    for a in range(3):
        assert not is_quasibad(no_obligations(3), a)


def test_subsingletons():
    assert is_subsingleton(0)
    assert is_subsingleton(StateSet.of(3, [2]))
    assert not is_subsingleton(0b11)
    assert is_cosubsingleton(full(4), 4)
    assert is_cosubsingleton(0b0111, 4)
    assert not is_cosubsingleton(0b0011, 4)


def test_classify_examples():
    assert classify(no_obligations(3)) == NO_OBLIGATIONS
    assert classify(avoid_only(3, 1)) == AvoidOnly(1)
    assert classify(avoid_none(2)) == AVOID_NONE
    m = canon2_II(2, 0b01, 0b10)
    assert classify(m) == NOT_CJ97
    assert not satisfies(m, "CJ97").passed


def test_n1_avoid_only_is_avoid_none():
    # with a single world, avoiding it leaves nothing to require beyond W itself
    assert avoid_only(1, 0) == avoid_none(1)
    assert classify(avoid_only(1, 0)) == AVOID_NONE


@pytest.mark.parametrize("n", range(0, 5))
def test_constructors_satisfy_cj97(n):
    models = [no_obligations(n), avoid_none(n)] + [avoid_only(n, e) for e in range(n)]
    for m in models:
        assert satisfies(m, PRESETS["CJ97"]).passed
        assert classify_checked(m) != NOT_CJ97


def test_named_models_distinct_from_two_worlds():
    for n in range(2, 5):
        models = [no_obligations(n), avoid_none(n)] + [avoid_only(n, e) for e in range(n)]
        assert len(set(models)) == n + 2
