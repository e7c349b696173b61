"""Power-set algebra over a small finite world set.

Worlds are indices ``0..n-1``. A set of worlds is a bit-vector (world ``i`` is
bit ``i``), so the integer value of a set doubles as its canonical encoding.
A family of sets is again a bit-vector, of length ``2**n``, with bit ``s`` set
when the set encoded by ``s`` is a member. An obligation model is one family
per context, indexed by the context's encoding.

The hot paths elsewhere in the package work on the raw integers; the classes
here wrap them with ambient-size checks for public use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

MAX_WORLDS = 8


class WorldMismatchError(ValueError):
    """Two operands were built over different world counts."""


def check_n(n: int) -> int:
    if not 0 <= n <= MAX_WORLDS:
        raise ValueError(f"world count must be in [0, {MAX_WORLDS}], got {n}")
    return n


def full(n: int) -> int:
    """Encoding of the whole world set W."""
    return (1 << n) - 1


def popcount(bits: int) -> int:
    return bin(bits).count("1")


def members(bits: int) -> Iterator[int]:
    """Ascending indices of the set bits."""
    i = 0
    while bits:
        if bits & 1:
            yield i
        bits >>= 1
        i += 1


def subsets(base: int) -> Iterator[int]:
    """Every subset of ``base``, ascending by encoding."""
    sub = 0
    while True:
        yield sub
        if sub == base:
            return
        # next subset of base in increasing order
        sub = (sub - base) & base


def supersets(base: int, n: int) -> Iterator[int]:
    """Every superset of ``base`` inside W, ascending."""
    rest = full(n) & ~base
    for extra in subsets(rest):
        yield base | extra


def subset_mask(base: int) -> int:
    """Family (as bits over encodings) of all subsets of ``base``."""
    mask = 0
    for s in subsets(base):
        mask |= 1 << s
    return mask


def family_members(fam: int) -> Iterator[int]:
    return members(fam)


# ---------------------------------------------------------------------------
# checked wrappers


@dataclass(frozen=True)
class StateSet:
    """A subset of the world set ``{0, ..., n-1}``."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        check_n(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#b} outside a world set of size {self.n}")

    @classmethod
    def of(cls, n: int, worlds: Iterable[int] = ()) -> "StateSet":
        bits = 0
        for w in worlds:
            if not 0 <= w < n:
                raise ValueError(f"world {w} not in range(0, {n})")
            bits |= 1 << w
        return cls(bits, n)

    @classmethod
    def empty(cls, n: int) -> "StateSet":
        return cls(0, n)

    @classmethod
    def universe(cls, n: int) -> "StateSet":
        return cls(full(n), n)

    def _other(self, other: "StateSet") -> int:
        if not isinstance(other, StateSet):
            return NotImplemented  # type: ignore[return-value]
        if other.n != self.n:
            raise WorldMismatchError(f"world counts differ: {self.n} vs {other.n}")
        return other.bits

    def __and__(self, other: "StateSet") -> "StateSet":
        return StateSet(self.bits & self._other(other), self.n)

    def __or__(self, other: "StateSet") -> "StateSet":
        return StateSet(self.bits | self._other(other), self.n)

    def __sub__(self, other: "StateSet") -> "StateSet":
        return StateSet(self.bits & ~self._other(other), self.n)

    def __invert__(self) -> "StateSet":
        return StateSet(full(self.n) & ~self.bits, self.n)

    def complement(self) -> "StateSet":
        return ~self

    def issubset(self, other: "StateSet") -> bool:
        return self.bits & ~self._other(other) == 0

    def __le__(self, other: "StateSet") -> bool:  # type: ignore[override]
        return self.issubset(other)

    def __contains__(self, world: int) -> bool:
        return 0 <= world < self.n and bool(self.bits >> world & 1)

    def __iter__(self) -> Iterator[int]:
        return members(self.bits)

    def __len__(self) -> int:
        return popcount(self.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def subsets(self) -> Iterator["StateSet"]:
        return (StateSet(s, self.n) for s in subsets(self.bits))

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self)) + "}"


def enumerate_subsets(base: StateSet) -> Iterator[StateSet]:
    """Yield the ``2**|base|`` subsets of ``base`` in ascending encoding."""
    return base.subsets()


SetLike = Union[StateSet, int]


def _bits(x: SetLike, n: int) -> int:
    if isinstance(x, StateSet):
        if x.n != n:
            raise WorldMismatchError(f"world counts differ: {x.n} vs {n}")
        return x.bits
    if x < 0 or x >> n:
        raise ValueError(f"set encoding {x} outside a world set of size {n}")
    return x


@dataclass(frozen=True)
class Family:
    """A set of StateSets, stored as a ``2**n``-bit vector."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        check_n(self.n)
        if self.bits < 0 or self.bits >> (1 << self.n):
            raise ValueError("family bits outside the power set")

    @classmethod
    def of(cls, n: int, sets: Iterable[SetLike]) -> "Family":
        bits = 0
        for s in sets:
            bits |= 1 << _bits(s, n)
        return cls(bits, n)

    def __contains__(self, s: object) -> bool:
        if not isinstance(s, (StateSet, int)):
            return False
        return bool(self.bits >> _bits(s, self.n) & 1)

    def __iter__(self) -> Iterator[StateSet]:
        return (StateSet(s, self.n) for s in members(self.bits))

    def __len__(self) -> int:
        return popcount(self.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return "{" + ", ".join(map(repr, self)) + "}"


@dataclass(frozen=True)
class ObModel:
    """The map X -> ob(X) over all ``2**n`` contexts.

    ``table[x]`` is the family bit-vector of ob(x). Equality is exact table
    equality.
    """

    n: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        check_n(self.n)
        size = 1 << self.n
        if len(self.table) != size:
            raise ValueError(f"table must have {size} entries, got {len(self.table)}")
        limit = 1 << size
        for fam in self.table:
            if not 0 <= fam < limit:
                raise ValueError("family bits outside the power set")

    @classmethod
    def empty(cls, n: int) -> "ObModel":
        return cls(n, (0,) * (1 << n))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[SetLike, SetLike]]) -> "ObModel":
        """Build from ``(context, proposition)`` memberships."""
        table = [0] * (1 << n)
        for x, y in pairs:
            table[_bits(x, n)] |= 1 << _bits(y, n)
        return cls(n, tuple(table))

    def get(self, x: SetLike) -> Family:
        return Family(self.table[_bits(x, self.n)], self.n)

    def has(self, x: SetLike, y: SetLike) -> bool:
        return bool(self.table[_bits(x, self.n)] >> _bits(y, self.n) & 1)

    def add(self, x: SetLike, y: SetLike) -> "ObModel":
        xb, yb = _bits(x, self.n), _bits(y, self.n)
        table = list(self.table)
        table[xb] |= 1 << yb
        return ObModel(self.n, tuple(table))

    def pairs(self) -> Iterator[tuple[int, int]]:
        for x, fam in enumerate(self.table):
            for y in members(fam):
                yield x, y

    def __le__(self, other: "ObModel") -> bool:
        """Pointwise inclusion: every membership of self holds in other."""
        if other.n != self.n:
            raise WorldMismatchError(f"world counts differ: {self.n} vs {other.n}")
        return all(a & ~b == 0 for a, b in zip(self.table, other.table))

    def nonempty_entries(self) -> int:
        return sum(1 for fam in self.table if fam)

    def sort_key(self) -> tuple[int, ...]:
        """Canonical order: lexicographic on the table, context ∅ first."""
        return self.table

    def __repr__(self) -> str:
        parts = []
        for x, fam in enumerate(self.table):
            if fam:
                parts.append(f"{StateSet(x, self.n)!r}: {Family(fam, self.n)!r}")
        return f"ObModel(n={self.n}, {{{'; '.join(parts)}}})"


def model_get(m: ObModel, x: SetLike) -> Family:
    return m.get(x)


def model_add(m: ObModel, x: SetLike, y: SetLike) -> ObModel:
    return m.add(x, y)


def model_from_function(n: int, fn) -> ObModel:
    """Tabulate ``fn(x, y) -> bool`` over all context/proposition encodings."""
    size = 1 << n
    table = []
    for x in range(size):
        fam = 0
        for y in range(size):
            if fn(x, y):
                fam |= 1 << y
        table.append(fam)
    return ObModel(n, tuple(table))


def all_tables(n: int) -> Iterator[tuple[int, ...]]:
    """Every raw table over n worlds, in canonical (lexicographic) order."""
    size = 1 << n
    return itertools.product(range(1 << size), repeat=size)


def sets_from_names(names: Sequence[str], worlds: Sequence[str]) -> int:
    index = {w: i for i, w in enumerate(worlds)}
    bits = 0
    for name in names:
        bits |= 1 << index[name]
    return bits
