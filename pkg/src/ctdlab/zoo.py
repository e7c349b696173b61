"""Named models, the Ought predicate, and the bad/quasibad vocabulary."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .axioms import PRESETS, passes
from .sets import ObModel, SetLike, StateSet, _bits, full, members, model_from_function, popcount


@dataclass(frozen=True)
class Classification:
    kind: str  # NoObligations | AvoidNone | AvoidOnly | NotCJ97
    world: Optional[int] = None

    def __str__(self) -> str:
        if self.kind == "AvoidOnly" and self.world is not None:
            return f"AvoidOnly({self.world})"
        return self.kind


NO_OBLIGATIONS = Classification("NoObligations")
AVOID_NONE = Classification("AvoidNone")
NOT_CJ97 = Classification("NotCJ97")


def AvoidOnly(world: int) -> Classification:
    return Classification("AvoidOnly", world)


def ought(m: ObModel, a: SetLike, b: SetLike) -> bool:
    """Ought(a|b): for every x ⊆ b meeting a, a ∈ ob(x)."""
    a, b = _bits(a, m.n), _bits(b, m.n)
    x = 0
    while True:
        if a & x and not m.table[x] >> a & 1:
            return False
        if x == b:
            return True
        x = (x - b) & b


def ought_memberships(n: int, a: int, b: int) -> list[tuple[int, int]]:
    """The (context, proposition) pairs that Ought(a|b) demands."""
    out = []
    x = 0
    while True:
        if a & x:
            out.append((x, a))
        if x == b:
            return out
        x = (x - b) & b


def canon2(n: int, a: SetLike, b: SetLike, order: str = "verbatim") -> ObModel:
    """ob(x) = ∅ if x∩b = ∅; {t ⊇ x∩b} if x∩a = ∅; else {t ⊇ x∩a}.

    ``order="a_first"`` tests x∩a before x∩b, which is the least model of the
    two oughts for every (a, b); the two orders agree when a ⊆ b.
    """
    a, b = _bits(a, n), _bits(b, n)

    def fn(x: int, t: int) -> bool:
        xa, xb = x & a, x & b
        if order == "a_first" and xa:
            return xa & ~t == 0
        if not xb:
            return False
        if not xa:
            return xb & ~t == 0
        return xa & ~t == 0

    _check_order(order)
    return model_from_function(n, fn)


def canon2_II(n: int, a: SetLike, b: SetLike, order: str = "verbatim") -> ObModel:
    """ob(x) = ∅ if x∩b = ∅; {y : x∩y = x∩b} if x∩a = ∅; else {y : x∩y = x∩a}."""
    a, b = _bits(a, n), _bits(b, n)

    def fn(x: int, y: int) -> bool:
        xa, xb = x & a, x & b
        if order == "a_first" and xa:
            return x & y == xa
        if not xb:
            return False
        if not xa:
            return x & y == xb
        return x & y == xa

    _check_order(order)
    return model_from_function(n, fn)


def _check_order(order: str) -> None:
    if order not in ("verbatim", "a_first"):
        raise ValueError(f"unknown branch order {order!r}")


def avoid_only(n: int, e: int) -> ObModel:
    if not 0 <= e < n:
        raise ValueError(f"world {e} not in range(0, {n})")
    keep = full(n) & ~(1 << e)
    return model_from_function(n, lambda x, y: bool(x & y) and (x & keep) & ~y == 0)


def avoid_none(n: int) -> ObModel:
    return model_from_function(n, lambda x, y: x != 0 and x & ~y == 0)


def no_obligations(n: int) -> ObModel:
    return ObModel.empty(n)


def is_bad(m: ObModel, a: int) -> bool:
    """Some x ∋ a has x∖{a} ∈ ob(x)."""
    bit = 1 << a
    for x, fam in enumerate(m.table):
        if x & bit and fam >> (x & ~bit) & 1:
            return True
    return False


def is_quasibad(m: ObModel, a: int) -> bool:
    """Some y ∈ ob(x) with a ∈ x∖y."""
    bit = 1 << a
    for x, fam in enumerate(m.table):
        if not x & bit:
            continue
        for y in members(fam):
            if not y & bit:
                return True
    return False


def bad_worlds(m: ObModel) -> list[int]:
    return [a for a in range(m.n) if is_bad(m, a)]


def is_subsingleton(s: SetLike) -> bool:
    bits = s.bits if isinstance(s, StateSet) else s
    return popcount(bits) <= 1


def is_cosubsingleton(s: SetLike, n: int) -> bool:
    bits = _bits(s, n)
    return popcount(full(n) & ~bits) <= 1


def classify(m: ObModel) -> Classification:
    """Match against noObligations, avoidNone, avoidOnly(0..n-1), in that order."""
    if m == no_obligations(m.n):
        return NO_OBLIGATIONS
    if m == avoid_none(m.n):
        return AVOID_NONE
    for a in range(m.n):
        if m == avoid_only(m.n, a):
            return AvoidOnly(a)
    return NOT_CJ97


def classify_checked(m: ObModel) -> Classification:
    """classify, asserting agreement with the CJ97 axiom check."""
    c = classify(m)
    if (c != NOT_CJ97) != passes(m, PRESETS["CJ97"]):
        raise AssertionError(f"classification {c} disagrees with the CJ97 check on {m!r}")
    return c


CONSTRUCTORS = {
    "canon2": canon2,
    "canon2_II": canon2_II,
    "avoidOnly": avoid_only,
    "avoidNone": avoid_none,
    "noObligations": no_obligations,
}
