import dataclasses
import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracle
from ctdlab.axioms import check_axiom
from ctdlab.cli import data_path
from ctdlab.closure import (
    GRADES,
    MembershipPremise,
    OughtPremise,
    RuleId,
    check_derivation,
    closure_of,
    ctd_premises,
    derivation_from_json,
    derivation_to_json,
    derive,
    expand_premises,
    grades_anomaly,
    grades_premises,
    least_model,
    load_derivation,
    parse_rules,
    rules_for,
)
from ctdlab.axioms import PRESETS
from ctdlab.sets import ObModel
from ctdlab.zoo import canon2, canon2_II, no_obligations

AXIOM_OF_RULE = {"Rb": "5b", "Rd": "5d", "Re": "5e", "Rf": "5f"}
RULE_SETS = [["Rb"], ["Rb", "Rd", "Rf"], ["Rb", "Re", "Rf"], ["Rd", "Re"], ["Rb", "Rd", "Re", "Rf"]]


def g(*names):
    return sum(1 << GRADES.index(c) for c in names)


def test_rules_for_system():
    assert rules_for(PRESETS["ANOMALY"]) == {RuleId.Rb, RuleId.Re, RuleId.Rf}
    assert rules_for(PRESETS["CJ97"]) == {RuleId.Rb, RuleId.Rd, RuleId.Re}
    with pytest.raises(ValueError):
        parse_rules(["Rc"])


def test_least_model_of_two_oughts_under_rb():
    m = least_model(2, ctd_premises(2, 0b01, 0b10), ["Rb"])
    assert m.table == (0, 0b1010, 0b1100, 0b0010)
    assert m == canon2_II(2, 0b01, 0b10, order="a_first")


def test_least_model_of_two_oughts_under_rb_rd_rf():
    m = least_model(2, ctd_premises(2, 0b01, 0b10), ["Rb", "Rd", "Rf"])
    assert m == canon2(2, 0b01, 0b10, order="a_first")
    assert m.has(0b11, 0b11)  # Rd lifts {0} ∈ ob({0}) to W


@pytest.mark.parametrize("rules", RULE_SETS)
def test_no_premises_gives_no_obligations(rules):
    for n in range(4):
        assert least_model(n, [], rules) == no_obligations(n)


def test_ought_premise_expansion():
    pairs = OughtPremise(0b01, 0b11).expand(2)
    assert sorted(pairs) == [(0b01, 0b01), (0b11, 0b01)]
    assert expand_premises(2, [OughtPremise(1, 3), MembershipPremise(3, 1)]) == pairs


@pytest.mark.parametrize("rules", RULE_SETS)
def test_least_model_is_least_closed_superset_at_two_worlds(rules):
    """Brute force: among all 65,536 tables containing the premises and closed
    under the rules' axioms, the least model is the unique minimum."""
    tables = oracle.all_tables(2)
    closed = np.ones(len(tables), dtype=bool)
    for r in rules:
        closed &= oracle.holds(tables, 2, AXIOM_OF_RULE[r])
    rng = random.Random(hash(tuple(rules)) & 0xFFFF)
    for _ in range(6):
        pairs = [(rng.randrange(4), rng.randrange(4)) for _ in range(rng.randrange(1, 3))]
        premises = [MembershipPremise(x, y) for x, y in pairs]
        m = least_model(2, premises, rules)
        ok = closed.copy()
        for x, y in pairs:
            ok &= ((tables[:, x] >> y) & 1).astype(bool)
        candidates = [ObModel(2, tuple(int(v) for v in row)) for row in tables[ok]]
        assert m in candidates
        assert all(m <= c for c in candidates)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=1, max_size=3),
    st.sampled_from(RULE_SETS),
)
def test_least_model_closed_and_derivable_at_three_worlds(pairs, rules):
    premises = [MembershipPremise(x, y) for x, y in pairs]
    m = least_model(3, premises, rules)
    for r in rules:
        assert check_axiom(m, AXIOM_OF_RULE[r]) is None
    for x, y in pairs:
        assert m.has(x, y)
    # every membership is justified, so m sits inside any closed superset
    sample = random.Random(0).sample(list(m.pairs()), min(5, sum(1 for _ in m.pairs())))
    for x, y in sample:
        d = derive(3, premises, rules, (x, y))
        assert d is not None and check_derivation(d)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.randoms(use_true_random=False))
def test_worklist_order_does_not_matter(a, b, rnd):
    premises = ctd_premises(3, a, b)
    start = expand_premises(3, premises)
    order = list(range(len(start)))
    rnd.shuffle(order)
    for rules in RULE_SETS:
        assert least_model(3, premises, rules, order=order) == least_model(3, premises, rules)


@pytest.mark.parametrize("rule", ["Rb", "Rd", "Re", "Rf"])
def test_closing_under_a_rule_satisfies_its_axiom(rule):
    rng = random.Random(3)
    for _ in range(20):
        m = ObModel(3, tuple(rng.randrange(256) if rng.random() < 0.3 else 0 for _ in range(8)))
        assert check_axiom(closure_of(m, [rule]), AXIOM_OF_RULE[rule]) is None


# ---------------------------------------------------------------------------
# derivations


def test_grades_fixture_is_valid():
    d = grades_anomaly()
    assert check_derivation(d)
    assert d.goal == (g("B", "C", "D"), g("C"))
    assert d.steps[4].x == g("A", "B", "C", "D")
    assert [s.rule for s in d.steps] == ["premise", "premise", "Rb", "Rb", "Rf", "Re", "Rb"]


def test_grades_least_model_contains_anomaly():
    m = least_model(5, grades_premises(), ["Rb", "Re", "Rf"])
    assert m.has(g("B", "C", "D"), g("C"))


def test_derive_grades_goal():
    d = derive(5, grades_premises(), ["Rb", "Re", "Rf"], (g("B", "C", "D"), g("C")), worlds=GRADES)
    assert d is not None and check_derivation(d)
    assert d.goal == (g("B", "C", "D"), g("C"))
    rule_steps = [s for s in d.steps if s.rule != "premise"]
    assert len(d.steps) == 7 and len(rule_steps) == 5
    assert sorted(s.rule for s in rule_steps) == ["Rb", "Rb", "Rb", "Re", "Rf"]


def test_derive_goal_that_is_a_premise():
    d = derive(5, grades_premises(), ["Rb", "Re", "Rf"], (g("A", "B"), g("A")))
    assert d is not None and len(d.steps) == 1 and d.steps[0].rule == "premise"


def test_derive_underivable_goal():
    assert derive(5, grades_premises(), ["Rb", "Re", "Rf"], (g("F"), g("A"))) is None
    assert not least_model(5, grades_premises(), ["Rb", "Re", "Rf"]).has(g("F"), g("A"))


def test_tampered_instantiation_is_flagged():
    d = grades_anomaly()
    bad = dataclasses.replace(d.steps[5], instantiation=(("Y", g("B", "C")),))
    tampered = dataclasses.replace(d, steps=d.steps[:5] + (bad,) + d.steps[6:])
    verdict = check_derivation(tampered)
    assert not verdict
    assert verdict.bad_steps == [5]


def test_tampered_premise_reference_is_flagged():
    d = grades_anomaly()
    bad = dataclasses.replace(d.steps[0], premise=1)
    verdict = check_derivation(dataclasses.replace(d, steps=(bad,) + d.steps[1:]))
    assert verdict.bad_steps == [0]


def test_forward_reference_is_flagged():
    d = grades_anomaly()
    bad = dataclasses.replace(d.steps[2], antecedents=(3,))
    verdict = check_derivation(dataclasses.replace(d, steps=d.steps[:2] + (bad,) + d.steps[3:]))
    assert 2 in verdict.bad_steps


def test_derivation_json_roundtrip():
    d = grades_anomaly()
    obj = derivation_to_json(d)
    assert derivation_from_json(json.loads(json.dumps(obj))) == d


def test_shipped_fixture_matches_builtin():
    assert load_derivation(data_path("grades_anomaly.json")) == grades_anomaly()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.integers(0, 7), st.integers(0, 7))
def test_derive_succeeds_iff_in_least_model(a, b, x, y):
    premises = ctd_premises(3, a, b)
    rules = ["Rb", "Rd", "Rf"]
    m = least_model(3, premises, rules)
    d = derive(3, premises, rules, (x, y))
    assert (d is not None) == m.has(x, y)
    if d is not None:
        assert check_derivation(d)
