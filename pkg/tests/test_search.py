import itertools

import numpy as np
import pytest

import oracle
from ctdlab.axioms import PRESETS, check_axiom
from ctdlab.search import (
    BudgetExhausted,
    SearchBudget,
    UnsupportedSearchError,
    classify_all,
    count_models,
    enumerate_models,
    find_independence_witness,
    pruning_soundness_sample,
    search_mode,
)
from ctdlab.sets import ObModel
from ctdlab.zoo import avoid_none, avoid_only, no_obligations

NAMES = ["5a", "5b", "5c", "5c-", "5d", "5e", "5f"]


def kinds(result):
    return {c.kind: k for c, k in result}


def test_cj97_models_at_one_world():
    got = list(enumerate_models(1, "CJ97"))
    assert got == sorted([no_obligations(1), avoid_none(1)], key=lambda m: m.table)


def test_cj97_models_at_two_worlds():
    got = set(enumerate_models(2, "CJ97"))
    assert got == {no_obligations(2), avoid_none(2), avoid_only(2, 0), avoid_only(2, 1)}


def test_unconstrained_count():
    assert count_models(2, []) == 65536
    assert count_models(1, []) == 16


def test_classification_tallies():
    assert kinds(classify_all(0)) == {"NoObligations": 1}
    assert kinds(classify_all(2)) == {"NoObligations": 1, "AvoidNone": 1, "AvoidOnly": 2}
    assert kinds(classify_all(3)) == {"NoObligations": 1, "AvoidNone": 1, "AvoidOnly": 3}


@pytest.fixture(scope="module")
def n2():
    t = oracle.all_tables(2)
    return t, {a: oracle.holds(t, 2, a) for a in NAMES}


def _systems(max_size):
    for r in range(max_size + 1):
        for combo in itertools.combinations(NAMES, r):
            if not ("5c" in combo and "5c-" in combo):
                yield list(combo)


@pytest.mark.parametrize("axioms", list(_systems(3)) + [
    ["5a", "5b", "5c", "5d", "5e"], ["5a", "5b", "5c-", "5d", "5e"], ["5a", "5b", "5c", "5d"],
    ["5a", "5b", "5c-", "5d"], ["5b", "5e", "5f"], ["5a", "5b", "5c-", "5d", "5e", "5f"],
], ids=lambda a: "+".join(a) or "none")
def test_search_matches_raw_filter_at_two_worlds(axioms, n2):
    tables, holds = n2
    ok = np.ones(len(tables), dtype=bool)
    for a in axioms:
        ok &= holds[a]
    expected = [tuple(int(v) for v in row) for row in tables[ok]]
    got = [m.table for m in enumerate_models(2, axioms)]
    assert got == expected  # same set, same canonical order


def test_trace_search_order_is_canonical():
    got = [m.table for m in enumerate_models(3, ["5b", "5d", "5e"])]
    assert got == sorted(got) and len(set(got)) == len(got)


@pytest.mark.parametrize("axioms", [["5b", "5d", "5e"], ["5a", "5b", "5c", "5d"], ["5b", "5e", "5f"]])
def test_trace_search_outputs_satisfy_system(axioms):
    for m in enumerate_models(3, axioms):
        for a in axioms:
            assert check_axiom(m, a) is None


@pytest.mark.parametrize("axioms", [PRESETS["CJ97"], ["5b", "5d", "5e"], ["5a", "5b", "5e"]],
                         ids=["CJ97", "bde", "abe"])
def test_pruning_is_sound_on_sampled_branches(axioms):
    report = pruning_soundness_sample(3, axioms, fraction=0.0005, seed=11)
    assert report["branches_sampled"] == 262
    assert report["mismatches"] == []


def test_mode_selection():
    assert search_mode(2, PRESETS["ANOMALY"]) == "traces"
    with pytest.raises(UnsupportedSearchError):
        list(enumerate_models(3, ["5a", "5e"]))
    with pytest.raises(UnsupportedSearchError):
        list(enumerate_models(5, "CJ97"))


def test_budget_exhaustion():
    with pytest.raises(BudgetExhausted):
        list(enumerate_models(3, ["5b"], SearchBudget(max_nodes=50)))


def test_worker_count_does_not_change_output():
    serial = list(enumerate_models(3, "CJ02-weak"))
    parallel = list(enumerate_models(3, "CJ02-weak", workers=2))
    assert serial == parallel
    assert list(enumerate_models(2, ["5b", "5e"], workers=2)) == list(enumerate_models(2, ["5b", "5e"]))


# ---------------------------------------------------------------------------
# independence


def test_independence_of_5e_found_small():
    r = find_independence_witness(["5a", "5b", "5c", "5d"], "5e", max_n=3)
    assert r.found and r.n <= 3
    assert check_axiom(r.model, "5e") == r.violation


def test_5f_not_independent_of_weak_system_at_two_worlds():
    r = find_independence_witness(["5a", "5b", "5c-", "5d"], "5f", max_n=2)
    assert not r.found
    assert r.per_n == [(1, "none"), (2, "none")]


def test_minimal_5a_violation():
    r = find_independence_witness([], "5a")
    assert r.n == 1
    assert r.model == ObModel.from_pairs(1, [(0, 0)])


def test_failing_axiom_cannot_be_held():
    with pytest.raises(ValueError):
        find_independence_witness(["5a"], "5a")


def test_unsupported_sizes_are_reported():
    r = find_independence_witness(["5a", "5e"], "5d", max_n=3)
    assert r.found and r.n <= 2
    r = find_independence_witness(["5c", "5d", "5e"], "5a", max_n=4, min_n=3)
    assert r.per_n[0] == (3, "unsupported")
