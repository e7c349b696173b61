"""Execute parsed scripts and render their reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import zoo
from .axioms import (
    PRESETS,
    AxiomConfig,
    AxiomSystem,
    AxiomUnavailableError,
    DEFAULT_CONFIG,
    satisfies,
    system as make_system,
)
from .closure import (
    MembershipPremise,
    OughtPremise,
    Premise,
    derivation_to_json,
    derive,
    format_derivation,
    least_model,
    rules_for,
)
from .dsl import (
    Ctor,
    ModelDef,
    ObLiteral,
    PremiseOb,
    PremiseOught,
    Query,
    Script,
    SetDef,
    SetLit,
    SetRef,
    SetTerm,
    SystemStmt,
    Worlds,
    format_statement,
    parse_model_literal,
)
from .lemmas import REGISTRY, verify_lemma
from .search import (
    BudgetExhausted,
    SearchBudget,
    UnsupportedSearchError,
    classify_all,
    enumerate_models,
    find_independence_witness,
)
from .sets import ObModel, members

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunFlags:
    json: bool = False
    seed: int = 0
    budget: Optional[int] = None  # max node expansions per search
    max_n: int = 4
    fail_fast: bool = False
    workers: int = 1
    config: AxiomConfig = DEFAULT_CONFIG

    def new_budget(self) -> Optional[SearchBudget]:
        if self.budget is None:
            return None
        return SearchBudget(max_nodes=self.budget, seed=self.seed)


@dataclass
class Section:
    query: str
    line: int
    status: str  # pass | fail | error | budget
    message: str
    data: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"query": self.query, "line": self.line, "status": self.status,
                "message": self.message, **self.data}


@dataclass
class Report:
    worlds: list[str]
    system: str
    sections: list[Section] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        statuses = {s.status for s in self.sections}
        if "budget" in statuses:
            return EXIT_BUDGET
        if statuses & {"fail", "error"}:
            return EXIT_FAIL
        return EXIT_OK

    def as_dict(self) -> dict:
        return {
            "worlds": self.worlds,
            "system": self.system,
            "sections": [s.as_dict() for s in self.sections],
            "exit_code": self.exit_code,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# model <-> names


def set_names(bits: int, worlds: Sequence[str]) -> list[str]:
    return [worlds[i] for i in members(bits)]


def model_to_json(m: ObModel, worlds: Sequence[str]) -> list[dict]:
    """Nonempty contexts only; every other context maps to the empty family."""
    return [
        {"context": set_names(x, worlds), "family": [set_names(y, worlds) for y in members(fam)]}
        for x, fam in enumerate(m.table)
        if fam
    ]


def model_from_json(entries: list[dict], worlds: Sequence[str]) -> ObModel:
    index = {w: i for i, w in enumerate(worlds)}

    def bits(names: list[str]) -> int:
        return sum(1 << index[w] for w in set(names))

    pairs = [(bits(e["context"]), bits(y)) for e in entries for y in e["family"]]
    return ObModel.from_pairs(len(worlds), pairs)


def format_model(m: ObModel, worlds: Sequence[str]) -> str:
    """The model as an obliteral, parseable back with ``parse_model_literal``."""

    def s(bits: int) -> str:
        return "{" + " ".join(set_names(bits, worlds)) + "}"

    parts = []
    for x, fam in enumerate(m.table):
        if fam:
            parts.append(f"ob {s(x)} :" + "".join(" " + s(y) for y in members(fam)))
    return "{ " + " ".join(parts) + " }" if parts else "{ }"


def load_model_literal(text: str, worlds: Sequence[str]) -> ObModel:
    env = _Env(tuple(worlds))
    return env.model_value(parse_model_literal(text, tuple(worlds)))


# ---------------------------------------------------------------------------
# evaluation


class _Env:
    def __init__(self, worlds: tuple[str, ...], config: AxiomConfig = DEFAULT_CONFIG) -> None:
        self.worlds = worlds
        self.n = len(worlds)
        self.index = {w: i for i, w in enumerate(worlds)}
        self.sets: dict[str, int] = {}
        self.models: dict[str, ObModel] = {}
        self.current: Optional[str] = None
        self.premises: list[Premise] = []
        self.system: AxiomSystem = PRESETS["CJ97"]
        self.config = config

    def set_value(self, s: SetTerm) -> int:
        if isinstance(s, SetRef):
            return self.sets[s.name]
        return sum(1 << self.index[w] for w in s.worlds)

    def model_value(self, v: Union[Ctor, ObLiteral]) -> ObModel:
        if isinstance(v, ObLiteral):
            pairs = [(self.set_value(ctx), self.set_value(p)) for ctx, props in v.entries for p in props]
            return ObModel.from_pairs(self.n, pairs)
        if v.name == "avoidOnly":
            return zoo.avoid_only(self.n, self.index[v.args[0]])
        if v.name == "avoidNone":
            return zoo.avoid_none(self.n)
        if v.name == "noObligations":
            return zoo.no_obligations(self.n)
        order = v.args[2] if len(v.args) > 2 else "verbatim"
        a, b = self.set_value(v.args[0]), self.set_value(v.args[1])
        return zoo.CONSTRUCTORS[v.name](self.n, a, b, order=order)

    def names(self, bits: int) -> list[str]:
        return set_names(bits, self.worlds)

    def fmt(self, bits: int) -> str:
        return "{" + " ".join(self.names(bits)) + "}"


def run(script: Script, flags: Optional[RunFlags] = None) -> Report:
    """Execute statements in order; each query appends one section."""
    flags = flags or RunFlags()
    env = _Env(script.worlds, flags.config)
    report = Report(list(env.worlds), env.system.name)
    for st in script.statements:
        if isinstance(st, Worlds):
            continue
        if isinstance(st, SetDef):
            env.sets[st.name] = env.set_value(st.value)
        elif isinstance(st, ModelDef):
            env.models[st.name] = env.model_value(st.value)
            env.current = st.name
        elif isinstance(st, PremiseOb):
            env.premises.append(MembershipPremise(env.set_value(st.context), env.set_value(st.prop)))
        elif isinstance(st, PremiseOught):
            env.premises.append(OughtPremise(env.set_value(st.prop), env.set_value(st.given)))
        elif isinstance(st, SystemStmt):
            env.system = make_system(list(st.names))
            report.system = env.system.name
        elif isinstance(st, Query):
            section = _run_query(env, st, flags)
            report.sections.append(section)
            if flags.fail_fast and section.status != "pass":
                break
    return report


def _run_query(env: _Env, q: Query, flags: RunFlags) -> Section:
    text = format_statement(q)
    try:
        handler = _HANDLERS[q.kind]
        return handler(env, q, flags)
    except BudgetExhausted as exc:
        return Section(text, q.line, "budget", str(exc))
    except (AxiomUnavailableError, UnsupportedSearchError, ValueError) as exc:
        return Section(text, q.line, "error", str(exc))


def _current_model(env: _Env) -> tuple[str, ObModel]:
    if env.current is None:
        raise ValueError("no model declared before this query")
    return env.current, env.models[env.current]


def _q_check(env: _Env, q: Query, flags: RunFlags) -> Section:
    name, m = _current_model(env)
    rep = satisfies(m, env.system, env.config)
    axioms = {}
    for a, v in rep.results.items():
        if v is None:
            axioms[a.value] = None
        else:
            axioms[a.value] = {"x": env.names(v.x),
                               "y": None if v.y is None else env.names(v.y),
                               "z": None if v.z is None else env.names(v.z)}
    failed = [a for a, v in axioms.items() if v is not None]
    msg = f"{name} satisfies {env.system.name}" if not failed else \
        f"{name} violates {', '.join(failed)}"
    return Section("check", q.line, "pass" if not failed else "fail", msg,
                   {"model": name, "system": env.system.name, "violations": axioms})


def _q_classify(env: _Env, q: Query, flags: RunFlags) -> Section:
    name, m = _current_model(env)
    c = zoo.classify(m)
    label = c.kind if c.world is None else f"AvoidOnly({env.worlds[c.world]})"
    cj97 = satisfies(m, PRESETS["CJ97"], env.config).passed
    agree = (c != zoo.NOT_CJ97) == cj97
    return Section("classify", q.line, "pass" if agree else "fail",
                   f"{name} is {label}", {"model": name, "classification": label,
                                          "satisfies_CJ97": cj97})


def _q_closure(env: _Env, q: Query, flags: RunFlags) -> Section:
    rules = sorted(r.value for r in rules_for(env.system))
    m = least_model(env.n, env.premises, rules, env.config.d_variant)
    env.models["closure"] = m
    env.current = "closure"
    data: dict = {"rules": rules, "model": model_to_json(m, env.worlds)}
    if q.goal is None:
        return Section(format_statement(q), q.line, "pass",
                       f"least model under {','.join(rules) or 'no rules'}", data)
    prop, ctx = env.set_value(q.goal[0]), env.set_value(q.goal[1])
    d = derive(env.n, env.premises, rules, (ctx, prop), env.config.d_variant, env.worlds)
    goal_text = f"{env.fmt(prop)} ∈ ob({env.fmt(ctx)})"
    if d is None:
        data["derivation"] = None
        return Section(format_statement(q), q.line, "fail", f"{goal_text} is not derivable", data)
    data["derivation"] = derivation_to_json(d)
    data["trace"] = format_derivation(d).splitlines()
    return Section(format_statement(q), q.line, "pass",
                   f"{goal_text} derived in {len(d.steps)} steps", data)


def _q_enumerate(env: _Env, q: Query, flags: RunFlags) -> Section:
    models = list(enumerate_models(env.n, env.system, flags.new_budget(), env.config, flags.workers))
    data = {"count": len(models), "models": [model_to_json(m, env.worlds) for m in models]}
    return Section("enumerate", q.line, "pass",
                   f"{len(models)} models of {env.system.name} over {env.n} worlds", data)


def _q_independence(env: _Env, q: Query, flags: RunFlags) -> Section:
    hold = make_system(list(q.hold)) if q.hold else AxiomSystem("EMPTY", frozenset())
    r = find_independence_witness(hold, q.fail, flags.max_n, flags.new_budget(), env.config)
    data = r.as_dict()
    data["search_status"] = data.pop("status")
    if r.model is not None:
        wnames = [f"w{i}" for i in range(r.n)]
        data["model"] = model_to_json(r.model, wnames)
        data["worlds"] = wnames
        v = r.violation
        data["violation"] = {"axiom": getattr(v.axiom, "value", v.axiom), "x": set_names(v.x, wnames),
                             "y": None if v.y is None else set_names(v.y, wnames),
                             "z": None if v.z is None else set_names(v.z, wnames)}
    if r.found:
        return Section(format_statement(q), q.line, "pass",
                       f"witness at n={r.n}: {r.violation.describe(wnames)}", data)
    status = "budget" if r.status == "budget" else "fail"
    return Section(format_statement(q), q.line, status,
                   f"no witness up to n={flags.max_n} ({r.status})", data)


def _q_lemma(env: _Env, q: Query, flags: RunFlags) -> Section:
    ids = list(REGISTRY) if q.lemma == "all" else [q.lemma]
    reports = [verify_lemma(REGISTRY[i], env.n, flags.new_budget()) for i in ids]
    bad = [r for r in reports if r.counterexample is not None]
    skipped = [r for r in reports if r.mode == "skipped"]
    # lemmas whose hypotheses cannot be searched at this n are listed, not failed
    status = "fail" if bad else "pass"
    if bad:
        msg = "counterexample to " + ", ".join(r.lemma for r in bad)
    else:
        msg = f"verified {len(reports) - len(skipped)} lemma(s) at n={env.n}"
        if skipped:
            msg += "; skipped " + ", ".join(r.lemma for r in skipped)
    return Section(format_statement(q), q.line, status, msg,
                   {"reports": [r.as_dict() for r in reports]})


_HANDLERS = {
    "check": _q_check,
    "classify": _q_classify,
    "closure": _q_closure,
    "enumerate": _q_enumerate,
    "independence": _q_independence,
    "lemma": _q_lemma,
}


def format_report(report: Report) -> str:
    lines = [f"worlds: {' '.join(report.worlds) or '(none)'}"]
    for s in report.sections:
        lines.append(f"[{s.status.upper():6}] line {s.line}: {s.query}: {s.message}")
        for t in s.data.get("trace", []):
            lines.append("         " + t)
        if s.query == "enumerate":
            for i, m in enumerate(s.data.get("models", [])):
                lines.append(f"         #{i}: " + _entries_text(m))
        if s.query.startswith("lemma"):
            for r in s.data.get("reports", []):
                if r["mode"] == "skipped":
                    lines.append(f"         {r['lemma']}: skipped ({r.get('note', '')})")
                    continue
                verdict = "counterexample" if "counterexample" in r else "verified"
                lines.append(
                    f"         {r['lemma']}: {verdict} over {r['models_checked']} models / "
                    f"{r['instances_checked']} instances ({r['mode']})"
                )
                if "counterexample" in r:
                    lines.append(f"           witness: {r['counterexample']}")
        if s.query.startswith("independence") and s.data.get("model") is not None:
            lines.append("         witness: " + _entries_text(s.data["model"]))
    lines.append(f"exit {report.exit_code}")
    return "\n".join(lines)


def _entries_text(entries: list[dict]) -> str:
    if not entries:
        return "{ }"
    parts = []
    for e in entries:
        fam = " ".join("{" + " ".join(y) + "}" for y in e["family"])
        parts.append("ob {" + " ".join(e["context"]) + "} : " + fam)
    return "{ " + " ".join(parts) + " }"


# re-exported for the CLI
__all__ = [
    "RunFlags", "Report", "Section", "run", "format_report", "format_model",
    "load_model_literal", "model_to_json", "model_from_json", "classify_all",
]
