"""Registry of the lemma chain behind the CJ97 classification, checked on finite models.

Every lemma is a hypothesis axiom set plus a statement that is evaluated
instance by instance: set variables range over all subsets of W, world
variables over all worlds. Inner quantifiers ("A ∈ ob(X) whenever A ⊆ X")
are evaluated per model as written.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .axioms import DEFAULT_CONFIG, AxiomConfig, AxiomId, AxiomSystem, cx_instance_holds
from .search import (
    BudgetExhausted,
    SearchBudget,
    _Searcher,
    enumerate_models,
    search_mode,
)
from .sets import ObModel, full, members, popcount, subsets, supersets
from .zoo import NOT_CJ97, avoid_none, avoid_only, classify, is_bad, is_quasibad

# (description, holds)
Instance = tuple[dict, bool]
Statement = Callable[[ObModel], Iterator[Instance]]

A, B, CS, CW, D, E = (
    AxiomId.A5a, AxiomId.A5b, AxiomId.A5cStrong, AxiomId.A5cWeak, AxiomId.A5d, AxiomId.A5e,
)
CJ97 = frozenset({A, B, CS, D, E})


@dataclass(frozen=True)
class LemmaSpec:
    id: str
    hypotheses: frozenset[AxiomId]
    statement: Statement = field(compare=False)
    summary: str = ""

    @property
    def system(self) -> AxiomSystem:
        return AxiomSystem(f"hyp:{self.id}", self.hypotheses)


REGISTRY: dict[str, LemmaSpec] = {}


def lemma(id: str, hypotheses, summary: str):
    def register(fn: Statement) -> Statement:
        REGISTRY[id] = LemmaSpec(id, frozenset(hypotheses), fn, summary)
        return fn

    return register


def _has(m: ObModel, x: int, y: int) -> bool:
    return bool(m.table[x] >> y & 1)


def _everywhere_above(m: ObModel, a: int) -> bool:
    """a ∈ ob(x) for every x ⊇ a."""
    return all(_has(m, x, a) for x in supersets(a, m.n))


def _world_pairs(n: int) -> Iterator[tuple[int, int]]:
    for a1 in range(n):
        for a2 in range(n):
            if a1 != a2:
                yield a1, a2


@lemma("single_ob_pair", {D, E, CW},
       "a1≠a2 ∉ A, {a1,a2} ∈ ob({a1,a2}), A ∈ ob(X) for all X ⊇ A ⟹ {a1},{a2} ∈ ob({a1,a2})")
def _single_ob_pair(m: ObModel):
    for a1, a2 in _world_pairs(m.n):
        p = 1 << a1 | 1 << a2
        for s in range(1 << m.n):
            if s & p:
                continue
            ante = _has(m, p, p) and _everywhere_above(m, s)
            ok = not ante or (_has(m, p, 1 << a1) and _has(m, p, 1 << a2))
            yield {"a1": a1, "a2": a2, "A": s}, ok


@lemma("semiglobal_holds", {A, CS, D, E},
       "a1≠a2 ∉ A, {a1,a2} ∈ ob({a1,a2}) ⟹ not (A ∈ ob(X) for all X ⊇ A)")
def _semiglobal_holds(m: ObModel):
    for a1, a2 in _world_pairs(m.n):
        p = 1 << a1 | 1 << a2
        for s in range(1 << m.n):
            if s & p:
                continue
            ok = not (_has(m, p, p) and _everywhere_above(m, s))
            yield {"a1": a1, "a2": a2, "A": s}, ok


@lemma("global_holds_specific", CJ97,
       "a1≠a2 ∉ A ⟹ not (A ∈ ob(X) for all X ⊇ A)")
def _global_holds_specific(m: ObModel):
    for a1, a2 in _world_pairs(m.n):
        p = 1 << a1 | 1 << a2
        for s in range(1 << m.n):
            if s & p:
                continue
            yield {"a1": a1, "a2": a2, "A": s}, not _everywhere_above(m, s)


@lemma("conditional_explosion", {A, B, D, E},
       "A ∈ ob(C), B∩Aᶜ∩C ≠ ∅ ⟹ B ∈ ob(Aᶜ∩C)")
def _conditional_explosion(m: ObModel):
    size = 1 << m.n
    for a in range(size):
        for b in range(size):
            for c in range(size):
                yield {"A": a, "B": b, "C": c}, cx_instance_holds(m, a, b, c)


@lemma("obSelfSdiff_of_bad", {B, D, E},
       "a bad, Y∖{a} ≠ ∅ ⟹ Y∖{a} ∈ ob(Y)")
def _obSelfSdiff_of_bad(m: ObModel):
    for a in range(m.n):
        bad = is_bad(m, a)
        for y in range(1 << m.n):
            rest = y & ~(1 << a)
            yield {"a": a, "Y": y}, not (bad and rest) or _has(m, y, rest)


@lemma("obSelf_of_obSelf", {B, D, E}, "X ∈ ob(X), Y ≠ ∅ ⟹ Y ∈ ob(Y)")
def _obSelf_of_obSelf(m: ObModel):
    size = 1 << m.n
    for x in range(size):
        self_x = _has(m, x, x)
        for y in range(size):
            yield {"X": x, "Y": y}, not (self_x and y) or _has(m, y, y)


@lemma("obSelf_of_obSelfSdiff", {B, D, E}, "∅ ≠ X∖{a} ∈ ob(X) ⟹ X ∈ ob(X)")
def _obSelf_of_obSelfSdiff(m: ObModel):
    for x in range(1 << m.n):
        for a in range(m.n):
            rest = x & ~(1 << a)
            yield {"X": x, "a": a}, not (rest and _has(m, x, rest)) or _has(m, x, x)


@lemma("obSelf_univ", {A, D, E}, "W∖{a} ∈ ob(W) ⟹ W ∈ ob(W)")
def _obSelf_univ(m: ObModel):
    w = full(m.n)
    for a in range(m.n):
        yield {"a": a}, not _has(m, w, w & ~(1 << a)) or _has(m, w, w)


@lemma("obSelf_of_bad.single", {A, B, D, E}, "a bad ⟹ {a} ∈ ob({a})")
def _obSelf_of_bad_single(m: ObModel):
    for a in range(m.n):
        yield {"a": a}, not is_bad(m, a) or _has(m, 1 << a, 1 << a)


def _global_antecedent(m: ObModel) -> bool:
    """Every A obligatory in all X ⊇ A is a cosubsingleton."""
    w = full(m.n)
    return all(
        popcount(w & ~s) <= 1 for s in range(1 << m.n) if _everywhere_above(m, s)
    )


def _local_instances(m: ObModel, premise: bool):
    for c in range(1 << m.n):
        for b in subsets(c):
            ok = not (premise and _has(m, c, b)) or popcount(c & ~b) <= 1
            yield {"B": b, "C": c}, ok


@lemma("local_of_global", {A, D, E},
       "(every A obligatory above itself is a cosubsingleton) ⟹ (B ⊆ C, B ∈ ob(C) ⟹ C∖B subsingleton)")
def _local_of_global(m: ObModel):
    yield from _local_instances(m, _global_antecedent(m))


@lemma("global_holds", CJ97, "A ∈ ob(X) for all X ⊇ A ⟹ A cosubsingleton")
def _global_holds(m: ObModel):
    w = full(m.n)
    for s in range(1 << m.n):
        yield {"A": s}, not _everywhere_above(m, s) or popcount(w & ~s) <= 1


@lemma("local_holds", CJ97, "B ⊆ C, B ∈ ob(C) ⟹ C∖B subsingleton")
def _local_holds(m: ObModel):
    yield from _local_instances(m, True)


@lemma("avoidNone_of_no_quasibad", CJ97,
       "ob ≠ noObligations and no quasibad world ⟹ ob = avoidNone")
def _avoidNone_of_no_quasibad(m: ObModel):
    nonempty = any(m.table)
    no_qb = not any(is_quasibad(m, a) for a in range(m.n))
    yield {}, not (nonempty and no_qb) or m == avoid_none(m.n)


@lemma("unique_bad", CJ97, "a, b bad ⟹ a = b")
def _unique_bad(m: ObModel):
    bad = [is_bad(m, a) for a in range(m.n)]
    for a in range(m.n):
        for b in range(m.n):
            yield {"a": a, "b": b}, not (bad[a] and bad[b]) or a == b


@lemma("bad_cosubsingleton_of_ob", {A, B, D, E},
       "a bad, X∩Y ∈ ob(X) ⟹ X∩Y = X or X∩Y = X∖{a}")
def _bad_cosubsingleton_of_ob(m: ObModel):
    size = 1 << m.n
    for a in range(m.n):
        bad = is_bad(m, a)
        for x in range(size):
            for y in range(size):
                xy = x & y
                ok = not (bad and _has(m, x, xy)) or xy == x or xy == x & ~(1 << a)
                yield {"a": a, "X": x, "Y": y}, ok


@lemma("obSelf_of_bad.nonsingle", {B, D, E}, "a bad, X ≠ {a}, X ≠ ∅ ⟹ X ∈ ob(X)")
def _obSelf_of_bad_nonsingle(m: ObModel):
    for a in range(m.n):
        bad = is_bad(m, a)
        for x in range(1 << m.n):
            ok = not (bad and x and x != 1 << a) or _has(m, x, x)
            yield {"a": a, "X": x}, ok


@lemma("obSelf_of_bad", {A, B, D, E}, "some world bad, X ≠ ∅ ⟹ X ∈ ob(X)")
def _obSelf_of_bad(m: ObModel):
    any_bad = any(is_bad(m, a) for a in range(m.n))
    for x in range(1 << m.n):
        yield {"X": x}, not (any_bad and x) or _has(m, x, x)


@lemma("sub_avoidOnly_of_bad", CJ97, "a bad ⟹ ob(Y) ⊆ avoidOnly_a(Y)")
def _sub_avoidOnly_of_bad(m: ObModel):
    for a in range(m.n):
        bad = is_bad(m, a)
        ref = avoid_only(m.n, a)
        for y in range(1 << m.n):
            yield {"a": a, "Y": y}, not bad or m.table[y] & ~ref.table[y] == 0


@lemma("avoidOnly_sub_of_bad", {A, B, D, E}, "a bad ⟹ avoidOnly_a(Y) ⊆ ob(Y)")
def _avoidOnly_sub_of_bad(m: ObModel):
    for a in range(m.n):
        bad = is_bad(m, a)
        ref = avoid_only(m.n, a)
        for y in range(1 << m.n):
            yield {"a": a, "Y": y}, not bad or ref.table[y] & ~m.table[y] == 0


@lemma("avoidOnly_of_bad", CJ97, "a bad ⟹ ob = avoidOnly_a")
def _avoidOnly_of_bad(m: ObModel):
    for a in range(m.n):
        yield {"a": a}, not is_bad(m, a) or m == avoid_only(m.n, a)


@lemma("bad_of_quasibad", {A, B, E}, "a quasibad ⟹ a bad")
def _bad_of_quasibad(m: ObModel):
    for a in range(m.n):
        yield {"a": a}, not is_quasibad(m, a) or is_bad(m, a)


@lemma("models_ofCJ_1997", CJ97,
       "ob is noObligations, avoidNone, or avoidOnly_a for some a")
def _models_of_cj97(m: ObModel):
    yield {}, classify(m) != NOT_CJ97


# ---------------------------------------------------------------------------
# verification


@dataclass
class LemmaReport:
    lemma: str
    n: int
    mode: str  # exhaustive | sampled | skipped
    models_checked: int = 0
    instances_checked: int = 0
    counterexample: Optional[dict] = None
    note: str = ""

    @property
    def verified(self) -> bool:
        return self.counterexample is None and self.mode != "skipped"

    def as_dict(self) -> dict:
        out = {
            "lemma": self.lemma,
            "n": self.n,
            "mode": self.mode,
            "models_checked": self.models_checked,
            "instances_checked": self.instances_checked,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        return out


def _check_model(spec: LemmaSpec, m: ObModel, report: LemmaReport) -> bool:
    report.models_checked += 1
    for inst, ok in spec.statement(m):
        report.instances_checked += 1
        if not ok:
            report.counterexample = {"model": list(m.table), "instance": inst}
            return False
    return True


def verify_lemma(
    spec: LemmaSpec | str,
    n: int,
    budget: Optional[SearchBudget] = None,
    mode: str = "auto",
    samples: int = 10_000,
    config: AxiomConfig = DEFAULT_CONFIG,
) -> LemmaReport:
    """Check ``spec`` on models of its hypotheses over n worlds.

    ``auto`` enumerates exhaustively and falls back to sampling when the
    budget runs out. ``sampled`` draws random models of the hypotheses by
    randomized descents of the search tree until ``samples`` instances have
    been checked; a shortfall is recorded in the report note.
    """
    if isinstance(spec, str):
        spec = REGISTRY[spec]
    try:
        search_mode(n, spec.system)
    except ValueError as exc:
        return LemmaReport(spec.id, n, "skipped", note=str(exc))
    if mode in ("auto", "exhaustive"):
        report = LemmaReport(spec.id, n, "exhaustive")
        try:
            for m in enumerate_models(n, spec.system, budget, config):
                if not _check_model(spec, m, report):
                    break
            return report
        except BudgetExhausted:
            if mode == "exhaustive":
                report.note = "budget exhausted before the enumeration finished"
                return report
    return _sample(spec, n, budget, samples, config)


def _sample(
    spec: LemmaSpec, n: int, budget: Optional[SearchBudget], samples: int, config: AxiomConfig
) -> LemmaReport:
    report = LemmaReport(spec.id, n, "sampled")
    searcher = _Searcher(n, spec.system, config, search_mode(n, spec.system))
    rng = random.Random(budget.seed if budget is not None else 0)
    local = budget or SearchBudget(max_nodes=2_000_000)
    seen: set[tuple[int, ...]] = set()
    size = 1 << n
    try:
        while report.instances_checked < samples:
            vals = [0] * size
            dead = False
            for k in range(size):
                local.tick()
                cands = searcher.candidates(vals, k)
                if not cands:
                    dead = True
                    break
                vals[k] = rng.choice(cands)
            if dead:
                continue
            m = searcher.leaf(vals)
            if m is None or m.table in seen:
                continue
            seen.add(m.table)
            if not _check_model(spec, m, report):
                return report
    except BudgetExhausted:
        pass
    if report.instances_checked < samples:
        report.note = f"sampling shortfall: {report.instances_checked} of {samples} instances"
    return report


def verify_all(n: int, budget_nodes: Optional[int] = None, **kw) -> list[LemmaReport]:
    out = []
    for spec in REGISTRY.values():
        budget = SearchBudget(max_nodes=budget_nodes) if budget_nodes else None
        out.append(verify_lemma(spec, n, budget, **kw))
    return out
