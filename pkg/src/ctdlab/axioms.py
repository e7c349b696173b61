"""Axioms 5(a)-5(g) as decidable predicates over finite obligation models.

Each checker scans instances in ascending ``(x, y, z)`` encoding order, using
the axiom's own variable names, and returns the first failing instance. The
variable roles per axiom are:

========  ============================================================
A5a       ∅ ∉ ob(x)
A5b       y ∈ ob(x), y∩x = z∩x  ⟹  z ∈ ob(x)
A5cStrong y, z ∈ ob(x)  ⟹  y∩z ∈ ob(x)
A5cWeak   y, z ∈ ob(x), x∩y∩z ≠ ∅  ⟹  y∩z ∈ ob(x)
A5d       y ∈ ob(x), x ⊆ z  ⟹  (z∖x)∪y ∈ ob(z)
A5e       z ∈ ob(x), y ⊆ x, y∩z ≠ ∅  ⟹  z ∈ ob(y)
A5f       x ∈ ob(y), x ∈ ob(z)  ⟹  x ∈ ob(y∪z)
========  ============================================================

A5d has a second reading, ``(z∖x)∪(y∩x)``, selected with
``AxiomConfig(d_variant="trace")``. A5g has no built-in body; it must be
supplied through ``AxiomConfig.g_formula``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .sets import ObModel, full, members, subsets, supersets


class AxiomId(str, enum.Enum):
    A5a = "A5a"
    A5b = "A5b"
    A5cWeak = "A5cWeak"
    A5cStrong = "A5cStrong"
    A5d = "A5d"
    A5e = "A5e"
    A5f = "A5f"
    A5g = "A5g"

    def __str__(self) -> str:
        return self.value

    @property
    def label(self) -> str:
        return {
            "A5a": "5(a)",
            "A5b": "5(b)",
            "A5cWeak": "5(c-)",
            "A5cStrong": "5(c)",
            "A5d": "5(d)",
            "A5e": "5(e)",
            "A5f": "5(f)",
            "A5g": "5(g)",
        }[self.value]


AXIOM_ORDER = list(AxiomId)

_ALIASES = {
    "5a": AxiomId.A5a,
    "5b": AxiomId.A5b,
    "5c": AxiomId.A5cStrong,
    "5cstrong": AxiomId.A5cStrong,
    "5c-": AxiomId.A5cWeak,
    "5cweak": AxiomId.A5cWeak,
    "5d": AxiomId.A5d,
    "5e": AxiomId.A5e,
    "5f": AxiomId.A5f,
    "5g": AxiomId.A5g,
}


class UnknownAxiomError(ValueError):
    pass


class AxiomUnavailableError(RuntimeError):
    """Raised when an axiom without a configured formula is evaluated."""


def parse_axiom(name: str) -> AxiomId:
    """Accept ``A5cStrong``, ``5c``, ``5(c)``, ``5c-``, ``5(c-)`` and the like."""
    key = name.strip()
    try:
        return AxiomId(key)
    except ValueError:
        pass
    key = key.lower().replace("(", "").replace(")", "").replace("⁻", "-")
    if key.startswith("a5"):
        key = key[1:]
    if key in _ALIASES:
        return _ALIASES[key]
    raise UnknownAxiomError(f"unknown axiom {name!r}")


@dataclass(frozen=True)
class AxiomSystem:
    name: str
    axioms: frozenset[AxiomId]

    def __post_init__(self) -> None:
        if AxiomId.A5cWeak in self.axioms and AxiomId.A5cStrong in self.axioms:
            raise ValueError("an axiom system takes at most one version of 5(c)")

    @classmethod
    def of(cls, name: str, axioms: Iterable[AxiomId | str]) -> "AxiomSystem":
        ids = frozenset(a if isinstance(a, AxiomId) else parse_axiom(a) for a in axioms)
        return cls(name, ids)

    def ordered(self) -> list[AxiomId]:
        return [a for a in AXIOM_ORDER if a in self.axioms]

    def __contains__(self, a: object) -> bool:
        return a in self.axioms

    def __str__(self) -> str:
        return f"{self.name}{{{', '.join(a.label for a in self.ordered())}}}"


_A = AxiomId
PRESETS: dict[str, AxiomSystem] = {
    "CJ97": AxiomSystem.of("CJ97", [_A.A5a, _A.A5b, _A.A5cStrong, _A.A5d, _A.A5e]),
    "CJ02-strong": AxiomSystem.of("CJ02-strong", [_A.A5a, _A.A5b, _A.A5cStrong, _A.A5d, _A.A5e]),
    "CJ02-weak": AxiomSystem.of("CJ02-weak", [_A.A5a, _A.A5b, _A.A5cWeak, _A.A5d, _A.A5e]),
    "CJ13": AxiomSystem.of("CJ13", [_A.A5a, _A.A5b, _A.A5cWeak, _A.A5d, _A.A5e]),
    "CJ22": AxiomSystem.of(
        "CJ22", [_A.A5a, _A.A5b, _A.A5cWeak, _A.A5d, _A.A5e, _A.A5f, _A.A5g]
    ),
    "ANOMALY": AxiomSystem.of("ANOMALY", [_A.A5b, _A.A5e, _A.A5f]),
}


def system(spec: str | Iterable[str]) -> AxiomSystem:
    """Look up a preset by name, or build an ad-hoc system from axiom names."""
    if isinstance(spec, str):
        if spec in PRESETS:
            return PRESETS[spec]
        spec = [s for s in spec.replace(",", " ").split() if s]
    names = list(spec)
    ids: set[AxiomId] = set()
    for name in names:
        if name in PRESETS:
            ids |= PRESETS[name].axioms
        else:
            ids.add(parse_axiom(name))
    return AxiomSystem("+".join(names) or "EMPTY", frozenset(ids))


# An instance predicate for 5(g): (table, n, x, y, z) -> bool, True when the
# instance holds.
InstanceFormula = Callable[[tuple, int, int, int, int], bool]


@dataclass(frozen=True)
class AxiomConfig:
    d_variant: str = "union"  # "union": (z∖x)∪y ; "trace": (z∖x)∪(y∩x)
    g_formula: Optional[InstanceFormula] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.d_variant not in ("union", "trace"):
            raise ValueError(f"unknown 5(d) variant {self.d_variant!r}")


DEFAULT_CONFIG = AxiomConfig()


@dataclass(frozen=True)
class Violation:
    axiom: str
    n: int
    x: int
    y: Optional[int] = None
    z: Optional[int] = None

    def describe(self, names: Optional[list[str]] = None) -> str:
        from .sets import StateSet

        def fmt(v: Optional[int]) -> str:
            if v is None:
                return "-"
            if names is None:
                return repr(StateSet(v, self.n))
            return "{" + " ".join(names[i] for i in members(v)) + "}"

        return f"{self.axiom} fails at x={fmt(self.x)} y={fmt(self.y)} z={fmt(self.z)}"

    def as_dict(self) -> dict:
        return {"axiom": self.axiom, "x": self.x, "y": self.y, "z": self.z}


# ---------------------------------------------------------------------------
# precomputed masks


@lru_cache(maxsize=None)
def trace_class_mask(n: int, x: int, t: int) -> int:
    """Family of every y with y∩x == t."""
    mask = 0
    outside = full(n) & ~x
    for extra in subsets(outside):
        mask |= 1 << (t | extra)
    return mask


@lru_cache(maxsize=None)
def meet_mask(n: int, y: int) -> int:
    """Family of every z with z∩y ≠ ∅."""
    mask = 0
    for z in range(1 << n):
        if z & y:
            mask |= 1 << z
    return mask


def _lowbit_index(bits: int) -> int:
    return (bits & -bits).bit_length() - 1


# ---------------------------------------------------------------------------
# single-axiom checkers; each returns the least failing (x, y, z) or None


def _first_5a(t: tuple, n: int):
    for x, fam in enumerate(t):
        if fam & 1:
            return (x, 0, None)
    return None


def _first_5b(t: tuple, n: int):
    for x, fam in enumerate(t):
        for y in members(fam):
            missing = trace_class_mask(n, x, y & x) & ~fam
            if missing:
                return (x, y, _lowbit_index(missing))
    return None


def _first_5c(t: tuple, n: int, weak: bool):
    for x, fam in enumerate(t):
        ys = list(members(fam))
        for y in ys:
            for z in ys:
                if weak and not (x & y & z):
                    continue
                if not fam >> (y & z) & 1:
                    return (x, y, z)
    return None


def _first_5d(t: tuple, n: int, variant: str):
    for x, fam in enumerate(t):
        for y in members(fam):
            for z in supersets(x, n):
                target = (z & ~x) | (y if variant == "union" else y & x)
                if not t[z] >> target & 1:
                    return (x, y, z)
    return None


def _first_5e(t: tuple, n: int):
    for x, fam in enumerate(t):
        if not fam:
            continue
        for y in subsets(x):
            missing = fam & meet_mask(n, y) & ~t[y]
            if missing:
                return (x, y, _lowbit_index(missing))
    return None


def _first_5f(t: tuple, n: int):
    size = 1 << n
    for x in range(size):
        holders = [c for c in range(size) if t[c] >> x & 1]
        for y in holders:
            for z in holders:
                if not t[y | z] >> x & 1:
                    return (x, y, z)
    return None


def _first_5g(t: tuple, n: int, formula: InstanceFormula):
    size = 1 << n
    for x in range(size):
        for y in range(size):
            for z in range(size):
                if not formula(t, n, x, y, z):
                    return (x, y, z)
    return None


def first_violation(
    table: tuple, n: int, axiom: AxiomId, config: AxiomConfig = DEFAULT_CONFIG
):
    """Least failing instance on a raw table, or None."""
    if axiom is AxiomId.A5a:
        return _first_5a(table, n)
    if axiom is AxiomId.A5b:
        return _first_5b(table, n)
    if axiom is AxiomId.A5cStrong:
        return _first_5c(table, n, weak=False)
    if axiom is AxiomId.A5cWeak:
        return _first_5c(table, n, weak=True)
    if axiom is AxiomId.A5d:
        return _first_5d(table, n, config.d_variant)
    if axiom is AxiomId.A5e:
        return _first_5e(table, n)
    if axiom is AxiomId.A5f:
        return _first_5f(table, n)
    if axiom is AxiomId.A5g:
        if config.g_formula is None:
            raise AxiomUnavailableError(
                "axiom formula unavailable: 5(g) has no configured formula"
            )
        return _first_5g(table, n, config.g_formula)
    raise UnknownAxiomError(str(axiom))


def holds_on(table: tuple, n: int, axiom: AxiomId, config: AxiomConfig = DEFAULT_CONFIG) -> bool:
    return first_violation(table, n, axiom, config) is None


def check_axiom(
    m: ObModel, axiom: AxiomId | str, config: AxiomConfig = DEFAULT_CONFIG
) -> Optional[Violation]:
    """Return the least violating instance of ``axiom`` in ``m``, or None."""
    a = axiom if isinstance(axiom, AxiomId) else parse_axiom(axiom)
    hit = first_violation(m.table, m.n, a, config)
    if hit is None:
        return None
    return Violation(a.value, m.n, *hit)


def instance_holds(
    m: ObModel, axiom: AxiomId | str, x: int, y: Optional[int] = None,
    z: Optional[int] = None, config: AxiomConfig = DEFAULT_CONFIG,
) -> bool:
    """Evaluate one instance directly from the axiom's formula."""
    a = axiom if isinstance(axiom, AxiomId) else parse_axiom(axiom)
    has = m.has
    if a is AxiomId.A5a:
        return not has(x, 0)
    if a is AxiomId.A5b:
        return not (has(x, y) and y & x == z & x) or has(x, z)
    if a is AxiomId.A5cStrong:
        return not (has(x, y) and has(x, z)) or has(x, y & z)
    if a is AxiomId.A5cWeak:
        return not (has(x, y) and has(x, z) and x & y & z) or has(x, y & z)
    if a is AxiomId.A5d:
        if not (has(x, y) and x & ~z == 0):
            return True
        target = (z & ~x) | (y if config.d_variant == "union" else y & x)
        return has(z, target)
    if a is AxiomId.A5e:
        return not (has(x, z) and y & ~x == 0 and y & z) or has(y, z)
    if a is AxiomId.A5f:
        return not (has(y, x) and has(z, x)) or has(y | z, x)
    if a is AxiomId.A5g:
        if config.g_formula is None:
            raise AxiomUnavailableError("axiom formula unavailable: 5(g)")
        return config.g_formula(m.table, m.n, x, y, z)
    raise UnknownAxiomError(str(axiom))


def recheck(m: ObModel, v: Violation, config: AxiomConfig = DEFAULT_CONFIG) -> bool:
    """True when the reported instance really fails in ``m``."""
    if v.axiom == "CX":
        return not cx_instance_holds(m, v.x, v.y, v.z)
    return not instance_holds(m, v.axiom, v.x, v.y, v.z, config)


@dataclass
class SystemReport:
    system: AxiomSystem
    results: dict[AxiomId, Optional[Violation]]

    @property
    def passed(self) -> bool:
        return all(v is None for v in self.results.values())

    def failures(self) -> list[Violation]:
        return [v for v in self.results.values() if v is not None]

    def as_dict(self) -> dict:
        return {
            "system": self.system.name,
            "passed": self.passed,
            "axioms": {
                a.value: (None if v is None else v.as_dict()) for a, v in self.results.items()
            },
        }


def satisfies(
    m: ObModel, s: AxiomSystem | str | Iterable[str], config: AxiomConfig = DEFAULT_CONFIG
) -> SystemReport:
    if not isinstance(s, AxiomSystem):
        s = system(s)
    return SystemReport(s, {a: check_axiom(m, a, config) for a in s.ordered()})


def passes(m: ObModel, s: AxiomSystem | str, config: AxiomConfig = DEFAULT_CONFIG) -> bool:
    if not isinstance(s, AxiomSystem):
        s = system(s)
    return all(first_violation(m.table, m.n, a, config) is None for a in s.ordered())


# ---------------------------------------------------------------------------
# conditional explosion


def cx_instance_holds(m: ObModel, a: int, b: int, c: int) -> bool:
    ctx = full(m.n) & ~a & c
    return not (m.has(c, a) and b & ctx) or m.has(ctx, b)


def check_cx(m: ObModel) -> Optional[Violation]:
    """Conditional explosion: a ∈ ob(c), b∩aᶜ∩c ≠ ∅ ⟹ b ∈ ob(aᶜ∩c).

    Returned as ``Violation("CX", x=a, y=b, z=c)``, least in (a, b, c).
    """
    n, t = m.n, m.table
    size = 1 << n
    w = full(n)
    for a in range(size):
        for b in range(size):
            for c in range(size):
                if not t[c] >> a & 1:
                    continue
                ctx = w & ~a & c
                if b & ctx and not t[ctx] >> b & 1:
                    return Violation("CX", n, a, b, c)
    return None
