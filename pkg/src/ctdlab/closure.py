"""Least models by saturation, and checkable derivations.

The generating rules read the monotone axioms left to right:

* ``Rb``  y ∈ ob(x)                    ⟹ z ∈ ob(x) for every z with z∩x = y∩x
* ``Rd``  y ∈ ob(x), x ⊆ z             ⟹ (z∖x)∪y ∈ ob(z)
* ``Re``  z ∈ ob(x), y ⊆ x, y∩z ≠ ∅    ⟹ z ∈ ob(y)
* ``Rf``  x ∈ ob(y), x ∈ ob(z)         ⟹ x ∈ ob(y∪z)

5(a) and 5(c) are constraints rather than generators and have no rule.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

from .axioms import AxiomId, AxiomSystem
from .sets import ObModel, full, members, subsets, supersets
from .axioms import trace_class_mask
from .zoo import ought_memberships


class RuleId(str, enum.Enum):
    Rb = "Rb"
    Rd = "Rd"
    Re = "Re"
    Rf = "Rf"

    def __str__(self) -> str:
        return self.value


RULE_ORDER = list(RuleId)
RULE_OF_AXIOM = {
    AxiomId.A5b: RuleId.Rb,
    AxiomId.A5d: RuleId.Rd,
    AxiomId.A5e: RuleId.Re,
    AxiomId.A5f: RuleId.Rf,
}


def rules_for(system: AxiomSystem) -> frozenset[RuleId]:
    """The generating rules of the monotone axioms in ``system``."""
    return frozenset(r for a, r in RULE_OF_AXIOM.items() if a in system.axioms)


def parse_rules(rules: Iterable[Union[RuleId, str]]) -> frozenset[RuleId]:
    return frozenset(r if isinstance(r, RuleId) else RuleId(r) for r in rules)


@dataclass(frozen=True)
class MembershipPremise:
    """y ∈ ob(x)."""

    x: int
    y: int

    def expand(self, n: int) -> list[tuple[int, int]]:
        return [(self.x, self.y)]


@dataclass(frozen=True)
class OughtPremise:
    """Ought(a|b): a ∈ ob(x) for every x ⊆ b meeting a."""

    a: int
    b: int

    def expand(self, n: int) -> list[tuple[int, int]]:
        return ought_memberships(n, self.a, self.b)


Premise = Union[MembershipPremise, OughtPremise]


def expand_premises(n: int, premises: Iterable[Premise]) -> list[tuple[int, int]]:
    seen: dict[tuple[int, int], None] = {}
    for p in premises:
        for pair in p.expand(n):
            seen.setdefault(pair, None)
    return list(seen)


def ctd_premises(n: int, a: int, b: int) -> list[Premise]:
    """The contrary-to-duty pair Ought(a|W), Ought(b|W∖a)."""
    w = full(n)
    return [OughtPremise(a, w), OughtPremise(b, w & ~a)]


# ---------------------------------------------------------------------------
# rule application


def _conclusions(
    n: int, table: Sequence[int], x: int, y: int, rule: RuleId, d_variant: str
) -> Iterator[tuple[tuple[int, int], tuple[tuple[int, int], ...], dict[str, int]]]:
    """Everything ``rule`` derives from membership (x, y) with ``table`` known.

    Yields (conclusion, antecedent pairs, instantiation), ascending.
    """
    if rule is RuleId.Rb:
        cls = trace_class_mask(n, x, y & x)
        for z in members(cls):
            yield (x, z), ((x, y),), {"Z": z}
    elif rule is RuleId.Rd:
        for z in supersets(x, n):
            target = (z & ~x) | (y if d_variant == "union" else y & x)
            yield (z, target), ((x, y),), {"Z": z}
    elif rule is RuleId.Re:
        for sub in subsets(x):
            if sub & y:
                yield (sub, y), ((x, y),), {"Y": sub}
    elif rule is RuleId.Rf:
        for other in range(1 << n):
            if table[other] >> y & 1:
                lo, hi = (x, other) if x <= other else (other, x)
                yield (x | other, y), ((lo, y), (hi, y)), {"Y": lo, "Z": hi}


def least_model(
    n: int,
    premises: Iterable[Premise],
    rules: Iterable[Union[RuleId, str]] = (),
    d_variant: str = "union",
    order: Optional[Sequence[int]] = None,
) -> ObModel:
    """Smallest model containing the premises and closed under ``rules``.

    ``order`` permutes the initial worklist; the result does not depend on it.
    """
    rules = parse_rules(rules)
    active = [r for r in RULE_ORDER if r in rules]
    table = [0] * (1 << n)
    queue: deque[tuple[int, int]] = deque()
    start = expand_premises(n, premises)
    if order is not None:
        start = [start[i] for i in order]
    for x, y in start:
        if not table[x] >> y & 1:
            table[x] |= 1 << y
            queue.append((x, y))
    while queue:
        x, y = queue.popleft()
        for rule in active:
            for (cx, cy), _, _ in _conclusions(n, table, x, y, rule, d_variant):
                if not table[cx] >> cy & 1:
                    table[cx] |= 1 << cy
                    queue.append((cx, cy))
    return ObModel(n, tuple(table))


def closure_of(m: ObModel, rules: Iterable[Union[RuleId, str]], d_variant: str = "union") -> ObModel:
    return least_model(m.n, [MembershipPremise(x, y) for x, y in m.pairs()], rules, d_variant)


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class DerivationStep:
    x: int
    y: int
    rule: str  # "premise" or a RuleId value
    antecedents: tuple[int, ...] = ()
    instantiation: tuple[tuple[str, int], ...] = ()
    premise: Optional[int] = None

    @property
    def statement(self) -> tuple[int, int]:
        return (self.x, self.y)

    def inst(self) -> dict[str, int]:
        return dict(self.instantiation)


@dataclass(frozen=True)
class Derivation:
    n: int
    premises: tuple[Premise, ...]
    steps: tuple[DerivationStep, ...]
    worlds: tuple[str, ...] = field(default=())

    @property
    def goal(self) -> tuple[int, int]:
        return self.steps[-1].statement

    def world_names(self) -> list[str]:
        return list(self.worlds) if self.worlds else [f"w{i}" for i in range(self.n)]


@dataclass
class DerivationCheck:
    errors: list[tuple[int, str]]

    def __bool__(self) -> bool:
        return not self.errors

    @property
    def bad_steps(self) -> list[int]:
        return sorted({i for i, _ in self.errors})


def _rule_conclusion(
    rule: RuleId, ants: list[tuple[int, int]], inst: dict[str, int], n: int, d_variant: str
) -> tuple[Optional[tuple[int, int]], str]:
    """Recompute what ``rule`` yields from the antecedents; (None, why) if it does not apply."""
    w = full(n)

    def in_w(*names: str) -> bool:
        return all(k in inst and 0 <= inst[k] and inst[k] & ~w == 0 for k in names)

    if rule is RuleId.Rb:
        if len(ants) != 1 or not in_w("Z"):
            return None, "Rb takes one antecedent and Z"
        (x, y), z = ants[0], inst["Z"]
        if z & x != y & x:
            return None, "Rb side condition Z∩X = Y∩X fails"
        return (x, z), ""
    if rule is RuleId.Rd:
        if len(ants) != 1 or not in_w("Z"):
            return None, "Rd takes one antecedent and Z"
        (x, y), z = ants[0], inst["Z"]
        if x & ~z:
            return None, "Rd side condition X ⊆ Z fails"
        return (z, (z & ~x) | (y if d_variant == "union" else y & x)), ""
    if rule is RuleId.Re:
        if len(ants) != 1 or not in_w("Y"):
            return None, "Re takes one antecedent and Y"
        (x, z), y = ants[0], inst["Y"]
        if y & ~x:
            return None, "Re side condition Y ⊆ X fails"
        if not y & z:
            return None, "Re side condition Y∩Z ≠ ∅ fails"
        return (y, z), ""
    if rule is RuleId.Rf:
        if len(ants) != 2 or not in_w("Y", "Z"):
            return None, "Rf takes two antecedents, Y and Z"
        (c1, p1), (c2, p2) = ants
        if p1 != p2:
            return None, "Rf antecedents disagree on the proposition"
        if (c1, c2) != (inst["Y"], inst["Z"]):
            return None, "Rf instantiation does not match the antecedent contexts"
        return (c1 | c2, p1), ""
    return None, f"unknown rule {rule}"


def check_derivation(d: Derivation, d_variant: str = "union") -> DerivationCheck:
    """Re-verify every step independently of how ``d`` was produced."""
    errors: list[tuple[int, str]] = []
    w = full(d.n)
    for i, step in enumerate(d.steps):
        if step.x & ~w or step.y & ~w or step.x < 0 or step.y < 0:
            errors.append((i, "statement outside the world set"))
            continue
        if step.rule == "premise":
            ok_index = step.premise is not None and 0 <= step.premise < len(d.premises)
            if not ok_index:
                errors.append((i, "premise reference out of range"))
            elif step.statement not in set(d.premises[step.premise].expand(d.n)):
                errors.append((i, "statement is not an instance of the cited premise"))
            continue
        try:
            rule = RuleId(step.rule)
        except ValueError:
            errors.append((i, f"unknown rule {step.rule!r}"))
            continue
        if any(not 0 <= a < i for a in step.antecedents):
            errors.append((i, "antecedent index does not precede the step"))
            continue
        ants = [d.steps[a].statement for a in step.antecedents]
        got, why = _rule_conclusion(rule, ants, step.inst(), d.n, d_variant)
        if got is None:
            errors.append((i, why))
        elif got != step.statement:
            errors.append((i, f"{rule} yields {got}, not {step.statement}"))
    if not d.steps:
        errors.append((0, "empty derivation"))
    return DerivationCheck(errors)


def derive(
    n: int,
    premises: Sequence[Premise],
    rules: Iterable[Union[RuleId, str]],
    goal: tuple[int, int],
    d_variant: str = "union",
    worlds: Sequence[str] = (),
) -> Optional[Derivation]:
    """Breadth-first derivation of ``goal``; None when it is not in the least model.

    Memberships are discovered level by level; within a level, sources are
    taken in ascending (x, y) order and rules in Rb, Rd, Re, Rf order, and
    the first justification found is kept.
    """
    rules = parse_rules(rules)
    active = [r for r in RULE_ORDER if r in rules]
    table = [0] * (1 << n)
    level: dict[tuple[int, int], int] = {}
    why: dict[tuple[int, int], tuple] = {}
    frontier: list[tuple[int, int]] = []
    for idx, prem in enumerate(premises):
        for pair in prem.expand(n):
            if pair not in level:
                level[pair] = 0
                why[pair] = ("premise", idx)
                table[pair[0]] |= 1 << pair[1]
                frontier.append(pair)
    depth = 0
    while goal not in level and frontier:
        depth += 1
        snapshot = list(table)
        fresh: list[tuple[int, int]] = []
        for x, y in sorted(frontier):
            for rule in active:
                for concl, ants, inst in _conclusions(n, snapshot, x, y, rule, d_variant):
                    if concl not in level:
                        level[concl] = depth
                        why[concl] = (rule, ants, inst)
                        table[concl[0]] |= 1 << concl[1]
                        fresh.append(concl)
        frontier = fresh
    if goal not in level:
        return None

    needed: set[tuple[int, int]] = set()
    stack = [goal]
    while stack:
        pair = stack.pop()
        if pair in needed:
            continue
        needed.add(pair)
        if why[pair][0] != "premise":
            stack.extend(why[pair][1])
    ordered = sorted(needed, key=lambda p: (level[p], p))
    index = {p: i for i, p in enumerate(ordered)}
    steps = []
    for pair in ordered:
        j = why[pair]
        if j[0] == "premise":
            steps.append(DerivationStep(pair[0], pair[1], "premise", premise=j[1]))
        else:
            rule, ants, inst = j
            steps.append(
                DerivationStep(
                    pair[0], pair[1], rule.value,
                    tuple(index[a] for a in ants), tuple(sorted(inst.items())),
                )
            )
    # ancestors sit at strictly lower levels, so the goal sorts last
    return Derivation(n, tuple(premises), tuple(steps), tuple(worlds))


# ---------------------------------------------------------------------------
# the grades fixture

GRADES = ("A", "B", "C", "D", "F")


def _g(*names: str) -> int:
    return sum(1 << GRADES.index(c) for c in names)


def grades_premises() -> list[Premise]:
    """Given A or B it ought to be A; given C or D it ought to be C."""
    return [MembershipPremise(_g("A", "B"), _g("A")), MembershipPremise(_g("C", "D"), _g("C"))]


def grades_anomaly() -> Derivation:
    """From the two grade premises, {C} ∈ ob({B, C, D}) using 5(b), 5(f), 5(e)."""
    ac = _g("A", "C")
    steps = (
        DerivationStep(_g("A", "B"), _g("A"), "premise", premise=0),
        DerivationStep(_g("C", "D"), _g("C"), "premise", premise=1),
        DerivationStep(_g("C", "D"), ac, "Rb", (1,), (("Z", ac),)),
        DerivationStep(_g("A", "B"), ac, "Rb", (0,), (("Z", ac),)),
        DerivationStep(
            _g("A", "B", "C", "D"), ac, "Rf", (3, 2),
            (("Y", _g("A", "B")), ("Z", _g("C", "D"))),
        ),
        DerivationStep(_g("B", "C", "D"), ac, "Re", (4,), (("Y", _g("B", "C", "D")),)),
        DerivationStep(_g("B", "C", "D"), _g("C"), "Rb", (5,), (("Z", _g("C")),)),
    )
    return Derivation(5, tuple(grades_premises()), steps, GRADES)


# ---------------------------------------------------------------------------
# JSON form


def _names(bits: int, worlds: Sequence[str]) -> list[str]:
    return [worlds[i] for i in members(bits)]


def _bits_of(names: Sequence[str], worlds: Sequence[str]) -> int:
    index = {w: i for i, w in enumerate(worlds)}
    bits = 0
    for name in names:
        if name not in index:
            raise ValueError(f"unknown world {name!r}")
        bits |= 1 << index[name]
    return bits


def premise_to_json(p: Premise, worlds: Sequence[str]) -> dict:
    if isinstance(p, MembershipPremise):
        return {"kind": "ob", "prop": _names(p.y, worlds), "context": _names(p.x, worlds)}
    return {"kind": "ought", "prop": _names(p.a, worlds), "given": _names(p.b, worlds)}


def premise_from_json(obj: dict, worlds: Sequence[str]) -> Premise:
    if obj["kind"] == "ob":
        return MembershipPremise(_bits_of(obj["context"], worlds), _bits_of(obj["prop"], worlds))
    if obj["kind"] == "ought":
        return OughtPremise(_bits_of(obj["prop"], worlds), _bits_of(obj["given"], worlds))
    raise ValueError(f"unknown premise kind {obj['kind']!r}")


def derivation_to_json(d: Derivation) -> dict:
    worlds = d.world_names()
    steps = []
    for s in d.steps:
        entry: dict = {
            "statement": {"context": _names(s.x, worlds), "prop": _names(s.y, worlds)},
            "rule": s.rule,
            "antecedents": list(s.antecedents),
            "instantiation": {k: _names(v, worlds) for k, v in s.instantiation},
        }
        if s.premise is not None:
            entry["premise"] = s.premise
        steps.append(entry)
    return {
        "worlds": worlds,
        "premises": [premise_to_json(p, worlds) for p in d.premises],
        "steps": steps,
    }


def derivation_from_json(obj: dict) -> Derivation:
    worlds = list(obj["worlds"])
    premises = tuple(premise_from_json(p, worlds) for p in obj["premises"])
    steps = []
    for s in obj["steps"]:
        steps.append(
            DerivationStep(
                _bits_of(s["statement"]["context"], worlds),
                _bits_of(s["statement"]["prop"], worlds),
                s["rule"],
                tuple(s.get("antecedents", ())),
                tuple(sorted((k, _bits_of(v, worlds)) for k, v in s.get("instantiation", {}).items())),
                s.get("premise"),
            )
        )
    return Derivation(len(worlds), premises, tuple(steps), tuple(worlds))


def dumps_derivation(d: Derivation) -> str:
    return json.dumps(derivation_to_json(d), indent=2) + "\n"


def load_derivation(path: Union[str, Path]) -> Derivation:
    return derivation_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def format_derivation(d: Derivation) -> str:
    worlds = d.world_names()

    def s(bits: int) -> str:
        return "{" + " ".join(_names(bits, worlds)) + "}"

    lines = []
    for i, step in enumerate(d.steps):
        if step.rule == "premise":
            just = f"premise {step.premise}"
        else:
            inst = ", ".join(f"{k}={s(v)}" for k, v in step.instantiation)
            ants = ",".join(map(str, step.antecedents))
            just = f"{step.rule} from {ants} [{inst}]"
        lines.append(f"{i:>3}. {s(step.y)} ∈ ob({s(step.x)})    {just}")
    return "\n".join(lines)
