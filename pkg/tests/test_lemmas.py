import pytest

from ctdlab.axioms import AxiomId, satisfies
from ctdlab.lemmas import CJ97, REGISTRY, LemmaSpec, verify_lemma
from ctdlab.sets import ObModel
from ctdlab.zoo import bad_worlds

# the two-bad-world model: ob({0}) = {{0},{0,1}}, ob({1}) = {{1},{0,1}}, ob(W) = {{0},{1},W}
TWO_BAD = ObModel(2, (0, 0b1010, 0b1100, 0b1110))

EXPECTED_IDS = {
    "single_ob_pair", "semiglobal_holds", "global_holds_specific", "conditional_explosion",
    "obSelfSdiff_of_bad", "obSelf_of_obSelf", "obSelf_of_obSelfSdiff", "obSelf_univ",
    "obSelf_of_bad.single", "local_of_global", "global_holds", "local_holds",
    "avoidNone_of_no_quasibad", "unique_bad", "bad_cosubsingleton_of_ob",
    "obSelf_of_bad.nonsingle", "obSelf_of_bad", "sub_avoidOnly_of_bad",
    "avoidOnly_sub_of_bad", "avoidOnly_of_bad", "bad_of_quasibad", "models_ofCJ_1997",
}


def test_registry_contents():
    assert set(REGISTRY) == EXPECTED_IDS
    assert len(REGISTRY) == 22


@pytest.mark.parametrize("lemma_id", sorted(EXPECTED_IDS))
def test_every_lemma_verifies_at_one_world(lemma_id):
    r = verify_lemma(lemma_id, 1)
    assert r.verified, r.as_dict()


@pytest.mark.parametrize("lemma_id", sorted(EXPECTED_IDS - {"bad_cosubsingleton_of_ob"}))
def test_lemmas_verify_at_two_worlds(lemma_id):
    r = verify_lemma(lemma_id, 2)
    assert r.mode == "exhaustive"
    assert r.verified, r.as_dict()


def test_spec_named_examples():
    assert verify_lemma("obSelf_of_obSelf", 2).verified
    assert verify_lemma("unique_bad", 2).verified
    r = verify_lemma("local_of_global", 2)
    assert r.verified and r.models_checked > 0


def test_bad_cosubsingleton_counterexample_under_stated_hypotheses():
    spec = REGISTRY["bad_cosubsingleton_of_ob"]
    assert spec.hypotheses == {AxiomId.A5a, AxiomId.A5b, AxiomId.A5d, AxiomId.A5e}
    r = verify_lemma(spec, 2)
    assert r.counterexample == {"model": list(TWO_BAD.table), "instance": {"a": 0, "X": 3, "Y": 1}}
    # the witness really is a model of the hypotheses, with two bad worlds
    assert satisfies(TWO_BAD, ["5a", "5b", "5d", "5e"]).passed
    assert bad_worlds(TWO_BAD) == [0, 1]
    assert not satisfies(TWO_BAD, "CJ97").passed


def test_bad_cosubsingleton_holds_under_cj97():
    spec = REGISTRY["bad_cosubsingleton_of_ob"]
    strengthened = LemmaSpec(spec.id, CJ97, spec.statement)
    for n in (2, 3):
        assert verify_lemma(strengthened, n).verified


def test_statements_detect_planted_failures():
    fails = lambda lid: not all(ok for _, ok in REGISTRY[lid].statement(TWO_BAD))
    assert fails("unique_bad")
    assert fails("avoidOnly_of_bad")
    assert fails("models_ofCJ_1997")


def test_lemmas_needing_raw_search_skip_at_three_worlds():
    r = verify_lemma("local_of_global", 3)
    assert r.mode == "skipped" and not r.verified


def test_lemma_with_5b_runs_exhaustively_at_three_worlds():
    r = verify_lemma("obSelf_of_obSelf", 3)
    assert r.mode == "exhaustive" and r.verified
    assert r.models_checked == 1038


def test_sampled_mode_reports_instances():
    r = verify_lemma("bad_of_quasibad", 3, mode="sampled", samples=500)
    assert r.mode == "sampled" and r.verified
    assert r.instances_checked >= 500 or "shortfall" in r.note
