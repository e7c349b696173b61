"""Enumeration of models of an axiom system, and independence search.

Contexts are filled in ascending encoding order, so every proper subset of a
context is fixed before the context itself. Each axiom instance is checked
when its largest context is filled:

* 5(a), 5(b), 5(c) are local to one context;
* 5(d) at the superset ``z``, 5(e) at the superset ``x``, 5(f) at ``y∪z``.

5(d) and 5(f) force memberships into the new context, 5(a) and 5(e) forbid
some, and 5(b)/5(c) filter whole candidate families.

Two state spaces are searched. Without 5(b) ("raw"), a context's value is
any family of propositions; this is practical for n ≤ 2. With 5(b)
("traces"), ob(x) is determined by its traces {y∩x : y ∈ ob(x)}, a family of
subsets of x, which brings the n=3 space down to 2**27 before pruning.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .axioms import (
    DEFAULT_CONFIG,
    AxiomConfig,
    AxiomId,
    AxiomSystem,
    AxiomUnavailableError,
    Violation,
    check_axiom,
    first_violation,
    meet_mask,
    system as make_system,
    trace_class_mask,
)
from .sets import ObModel, full, members, subsets
from .zoo import NOT_CJ97, Classification, classify

RAW_MAX_N = 2
TRACE_MAX_N = 4


class UnsupportedSearchError(ValueError):
    """The (n, system) pair is outside what the enumerator handles."""


class BudgetExhausted(RuntimeError):
    def __init__(self, nodes: int, message: str = "search budget exhausted") -> None:
        super().__init__(f"{message} after {nodes} node expansions")
        self.nodes = nodes


@dataclass
class SearchBudget:
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None
    seed: int = 0
    nodes: int = field(default=0, init=False)
    _started: Optional[float] = field(default=None, init=False, repr=False)
    _next_clock: int = field(default=0, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.max_nodes is not None and self.max_nodes <= 0:
            raise ValueError("max_nodes must be positive")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("max_seconds must be positive")

    def tick(self, k: int = 1) -> None:
        if self._started is None:
            self._started = time.monotonic()
        self.nodes += k
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExhausted(self.nodes)
        if self.max_seconds is not None and self.nodes >= self._next_clock:
            self._next_clock = self.nodes + 1024
            if time.monotonic() - self._started > self.max_seconds:
                raise BudgetExhausted(self.nodes, "wall-clock limit reached")


def _as_system(s) -> AxiomSystem:
    return s if isinstance(s, AxiomSystem) else make_system(s)


def search_mode(n: int, s: AxiomSystem) -> str:
    if AxiomId.A5b in s.axioms:
        if n > TRACE_MAX_N:
            raise UnsupportedSearchError(f"trace search supports n ≤ {TRACE_MAX_N}, got {n}")
        return "traces"
    if n > RAW_MAX_N:
        raise UnsupportedSearchError(
            f"n={n} without 5(b) is not searchable (raw enumeration needs n ≤ {RAW_MAX_N})"
        )
    return "raw"


# ---------------------------------------------------------------------------
# per-n geometry


@dataclass(frozen=True)
class _Geometry:
    n: int
    proper_subsets: tuple[tuple[int, ...], ...]
    union_pairs: tuple[tuple[tuple[int, int], ...], ...]
    elements: tuple[tuple[int, ...], ...]  # trace elements t ⊆ k


@lru_cache(maxsize=None)
def _geometry(n: int) -> _Geometry:
    size = 1 << n
    proper, pairs, elems = [], [], []
    for k in range(size):
        subs = [s for s in subsets(k) if s != k]
        proper.append(tuple(subs))
        pairs.append(tuple((y, z) for y in subs for z in subs if y <= z and y | z == k))
        elems.append(tuple(subsets(k)))
    return _Geometry(n, tuple(proper), tuple(pairs), tuple(elems))


def _closed(fam: int, weak: bool) -> bool:
    ms = list(members(fam))
    for i, y in enumerate(ms):
        for z in ms[i:]:
            m = y & z
            if weak and not m:
                continue
            if not fam >> m & 1:
                return False
    return True


def _submasks(mask: int) -> Iterator[int]:
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


class _Searcher:
    """Depth-first filler for one (n, system, mode)."""

    def __init__(self, n: int, s: AxiomSystem, config: AxiomConfig, mode: str) -> None:
        self.n = n
        self.system = s
        self.config = config
        self.mode = mode
        self.geo = _geometry(n)
        self.size = 1 << n
        ax = s.axioms
        self.a = AxiomId.A5a in ax
        self.b = AxiomId.A5b in ax
        self.c = AxiomId.A5cStrong in ax or AxiomId.A5cWeak in ax
        self.c_weak = AxiomId.A5cWeak in ax
        self.d = AxiomId.A5d in ax
        self.e = AxiomId.A5e in ax
        self.f = AxiomId.A5f in ax
        self.g = AxiomId.A5g in ax
        if self.g and config.g_formula is None:
            raise AxiomUnavailableError("axiom formula unavailable: 5(g) has no configured formula")

    # -- candidate generation -------------------------------------------------

    def candidates(
        self, vals: Sequence[int], k: int, budget: Optional[SearchBudget] = None
    ) -> list[int]:
        if self.mode == "traces":
            return self._trace_candidates(vals, k, budget)
        return self._raw_candidates(vals, k, budget)

    def _raw_candidates(
        self, t: Sequence[int], k: int, budget: Optional[SearchBudget]
    ) -> list[int]:
        n, geo = self.n, self.geo
        universe = (1 << self.size) - 1
        allowed = universe
        if self.a:
            allowed &= ~1
        if self.e:
            for y in geo.proper_subsets[k]:
                # z meeting y must already be in ob(y)
                allowed &= ~meet_mask(n, y) | t[y]
        required = 0
        if self.d:
            union = self.config.d_variant == "union"
            for x in geo.proper_subsets[k]:
                extra = k & ~x
                for y in members(t[x]):
                    required |= 1 << (extra | (y if union else y & x))
        if self.f:
            for y, z in geo.union_pairs[k]:
                required |= t[y] & t[z]
        if required & ~allowed:
            return []
        free = allowed & ~required
        out = []
        self_trace = self.d and self.config.d_variant == "trace"
        for i, sub in enumerate(_submasks(free)):
            if budget is not None and i & 255 == 255:
                budget.tick(256)
            fam = required | sub
            if self.b and not self._raw_5b(fam, k):
                continue
            if self.c and not _closed(fam, self.c_weak):
                continue
            if self_trace and any(not fam >> (y & k) & 1 for y in members(fam)):
                continue
            out.append(fam)
        return out

    def _raw_5b(self, fam: int, k: int) -> bool:
        for y in members(fam):
            cls = trace_class_mask(self.n, k, y & k)
            if cls & ~fam:
                return False
        return True

    def _trace_candidates(
        self, tr: Sequence[int], k: int, budget: Optional[SearchBudget]
    ) -> list[int]:
        geo = self.geo
        allowed = 0
        for t in geo.elements[k]:
            if self.a and t == 0:
                continue
            if self.e:
                ok = True
                for y in geo.proper_subsets[k]:
                    m = t & y
                    if m and not tr[y] >> m & 1:
                        ok = False
                        break
                if not ok:
                    continue
            allowed |= 1 << t
        required = 0
        if self.d:
            for x in geo.proper_subsets[k]:
                extra = k & ~x
                for t in members(tr[x]):
                    required |= 1 << (extra | t)
        if self.f:
            for y, z in geo.union_pairs[k]:
                for s in members(tr[y]):
                    for u in members(tr[z]):
                        if s & z == u & y:
                            required |= 1 << (s | u)
        if required & ~allowed:
            return []
        free = allowed & ~required
        out = []
        for i, sub in enumerate(_submasks(free)):
            if budget is not None and i & 255 == 255:
                budget.tick(256)
            fam = required | sub
            if self.c and not _closed(fam, self.c_weak):
                continue
            out.append(fam)
        if len(out) > 1:
            out.sort(key=lambda f: self.expand_one(k, f))
        return out

    # -- leaves -------------------------------------------------------------

    def expand_one(self, k: int, val: int) -> int:
        if self.mode == "raw":
            return val
        fam = 0
        for t in members(val):
            fam |= trace_class_mask(self.n, k, t)
        return fam

    def leaf(self, vals: Sequence[int]) -> Optional[ObModel]:
        table = tuple(self.expand_one(k, v) for k, v in enumerate(vals))
        if self.g and first_violation(table, self.n, AxiomId.A5g, self.config) is not None:
            return None
        return ObModel(self.n, table)

    # -- traversal ----------------------------------------------------------

    def run(
        self, budget: Optional[SearchBudget] = None, prefix: Sequence[int] = ()
    ) -> Iterator[ObModel]:
        vals = list(prefix) + [0] * (self.size - len(prefix))
        for k in range(len(prefix)):
            if vals[k] not in self.candidates(vals, k):
                return
        yield from self._dfs(vals, len(prefix), budget)

    def _dfs(self, vals: list[int], k: int, budget: Optional[SearchBudget]) -> Iterator[ObModel]:
        if k == self.size:
            m = self.leaf(vals)
            if m is not None:
                yield m
            return
        for cand in self.candidates(vals, k, budget):
            if budget is not None:
                budget.tick()
            vals[k] = cand
            yield from self._dfs(vals, k + 1, budget)
        vals[k] = 0

    def prefixes(self, depth: int) -> list[tuple[int, ...]]:
        """All consistent assignments of the first ``depth`` contexts, in order."""
        out: list[tuple[int, ...]] = []
        vals = [0] * self.size

        def rec(k: int) -> None:
            if k == depth:
                out.append(tuple(vals[:depth]))
                return
            for cand in self.candidates(vals, k):
                vals[k] = cand
                rec(k + 1)
            vals[k] = 0

        rec(0)
        return out


def _worker(args) -> list[tuple[int, ...]]:
    n, names, config, mode, prefix, max_nodes = args
    s = AxiomSystem("worker", frozenset(AxiomId(a) for a in names))
    budget = SearchBudget(max_nodes=max_nodes) if max_nodes else None
    return [m.table for m in _Searcher(n, s, config, mode).run(budget, prefix)]


def enumerate_models(
    n: int,
    s: AxiomSystem | str | Iterable[str],
    budget: Optional[SearchBudget] = None,
    config: AxiomConfig = DEFAULT_CONFIG,
    workers: int = 1,
) -> Iterator[ObModel]:
    """Every model over n worlds satisfying ``s``, each once, in canonical order.

    Raw search needs n ≤ 2; with 5(b) in the system the trace search runs up
    to n = 4 (n = 4 only within a budget in practice). With ``workers > 1``
    the tree is split on a prefix of contexts; the output order is unchanged.
    The node budget is then enforced per prefix rather than globally.
    """
    s = _as_system(s)
    mode = search_mode(n, s)
    searcher = _Searcher(n, s, config, mode)
    if workers <= 1 or n == 0:
        yield from searcher.run(budget)
        return
    depth = min(searcher.size - 1, 3 if n >= 3 else 1)
    prefixes = searcher.prefixes(depth)
    names = sorted(a.value for a in s.axioms)
    max_nodes = budget.max_nodes if budget is not None else None
    jobs = [(n, names, config, mode, p, max_nodes) for p in prefixes]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for tables in pool.map(_worker, jobs):
            for table in tables:
                yield ObModel(n, table)


def count_models(n: int, s, budget: Optional[SearchBudget] = None, **kw) -> int:
    return sum(1 for _ in enumerate_models(n, s, budget, **kw))


# ---------------------------------------------------------------------------
# classification


def classify_all(
    n: int, s="CJ97", budget: Optional[SearchBudget] = None, workers: int = 1,
    config: AxiomConfig = DEFAULT_CONFIG,
) -> list[tuple[Classification, int]]:
    """Tally classifications over every model of ``s``; AvoidOnly(a) tallied as AvoidOnly."""
    counts: Counter[str] = Counter()
    witnesses: list[ObModel] = []
    s = _as_system(s)
    for m in enumerate_models(n, s, budget, config, workers):
        c = classify(m)
        counts[c.kind] += 1
        if c == NOT_CJ97:
            witnesses.append(m)
    order = ["NoObligations", "AvoidNone", "AvoidOnly", "NotCJ97"]
    result = [(Classification(k), counts[k]) for k in order if counts[k]]
    if witnesses and _is_cj97(s):
        raise TheoremFalsified(witnesses[0], result)
    return result


def _is_cj97(s: AxiomSystem) -> bool:
    need = {AxiomId.A5a, AxiomId.A5b, AxiomId.A5cStrong, AxiomId.A5d, AxiomId.A5e}
    return need <= s.axioms


class TheoremFalsified(AssertionError):
    """A model of the full system failed to classify."""

    def __init__(self, model: ObModel, tally) -> None:
        super().__init__(f"model of CJ97 outside the classification: {model!r}")
        self.model = model
        self.tally = tally


# ---------------------------------------------------------------------------
# independence


@dataclass
class IndependenceResult:
    hold: frozenset[AxiomId]
    fail: AxiomId
    status: str  # found | inconclusive | budget
    n: Optional[int] = None
    model: Optional[ObModel] = None
    violation: Optional[Violation] = None
    per_n: list[tuple[int, str]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == "found"

    def as_dict(self) -> dict:
        return {
            "hold": sorted(a.value for a in self.hold),
            "fail": self.fail.value,
            "status": self.status,
            "n": self.n,
            "model": None if self.model is None else list(self.model.table),
            "violation": None if self.violation is None else self.violation.as_dict(),
            "per_n": [{"n": k, "status": st} for k, st in self.per_n],
        }


def _witness_key(m: ObModel) -> tuple:
    # fewest nonempty contexts, then fewest memberships, then earliest memberships
    pairs = tuple(m.pairs())
    return (m.nonempty_entries(), len(pairs), pairs)


def find_independence_witness(
    hold: Iterable[AxiomId | str],
    fail: AxiomId | str,
    max_n: int = 4,
    budget: Optional[SearchBudget] = None,
    config: AxiomConfig = DEFAULT_CONFIG,
    min_n: int = 1,
) -> IndependenceResult:
    """Smallest-n model of ``hold`` violating ``fail``, minimized.

    At the first n with any witness, all witnesses are enumerated and the one
    with fewest nonempty contexts, then fewest memberships, then the
    lexicographically least (context, proposition) list is returned. Per-n
    status is ``none`` (exhaustively absent), ``unsupported`` (n not
    searchable for this hold set) or ``budget``.
    """
    hold_sys = _as_system(list(hold)) if not isinstance(hold, AxiomSystem) else hold
    fail_id = fail if isinstance(fail, AxiomId) else make_system([fail]).ordered()[0]
    if fail_id in hold_sys.axioms:
        raise ValueError("the failing axiom must not be among the held ones")
    result = IndependenceResult(hold_sys.axioms, fail_id, "inconclusive")
    exhausted = False
    for n in range(min_n, max_n + 1):
        try:
            search_mode(n, hold_sys)
        except UnsupportedSearchError:
            result.per_n.append((n, "unsupported"))
            continue
        best: Optional[ObModel] = None
        try:
            for m in enumerate_models(n, hold_sys, budget, config):
                if first_violation(m.table, n, fail_id, config) is None:
                    continue
                if best is None or _witness_key(m) < _witness_key(best):
                    best = m
        except BudgetExhausted:
            exhausted = True
            result.per_n.append((n, "budget"))
            if best is None:
                break
        if best is not None:
            if not exhausted:
                result.per_n.append((n, "found"))
            result.status = "found"
            result.n = n
            result.model = best
            result.violation = check_axiom(best, fail_id, config)
            return result
        result.per_n.append((n, "none"))
    if exhausted:
        result.status = "budget"
    return result


# ---------------------------------------------------------------------------
# pruning soundness


def unpruned_completions(
    n: int, s, prefix: Sequence[int], config: AxiomConfig = DEFAULT_CONFIG
) -> list[ObModel]:
    """Models extending ``prefix`` (all but the last context), by filtering.

    Every value of the last context is tried and the complete model is checked
    with the plain axiom checkers; nothing is pruned.
    """
    s = _as_system(s)
    mode = search_mode(n, s)
    size = 1 << n
    if len(prefix) != size - 1:
        raise ValueError("prefix must fix every context but the last")
    searcher = _Searcher(n, s, config, mode)
    base = [searcher.expand_one(k, v) for k, v in enumerate(prefix)]
    top = size - 1
    choices = (1 << (1 << n)) if mode == "raw" else (1 << (1 << n))
    out = []
    axioms = s.ordered()
    for val in range(choices):
        if mode == "traces" and val & ~_trace_universe(n, top):
            continue
        table = tuple(base + [searcher.expand_one(top, val)])
        if all(first_violation(table, n, a, config) is None for a in axioms):
            out.append(ObModel(n, table))
    return out


def _trace_universe(n: int, k: int) -> int:
    mask = 0
    for t in subsets(k):
        mask |= 1 << t
    return mask


def pruning_soundness_sample(
    n: int, s, fraction: float = 0.01, seed: int = 0, config: AxiomConfig = DEFAULT_CONFIG
) -> dict:
    """Compare pruned search with unpruned filtering on sampled branches.

    A branch is a value assignment for every context except W. Branches are
    drawn uniformly from the unpruned space, and all branches the pruned
    search keeps are added so that non-empty cases are always covered.
    """
    s = _as_system(s)
    mode = search_mode(n, s)
    size = 1 << n
    searcher = _Searcher(n, s, config, mode)
    spaces = []
    for k in range(size - 1):
        spaces.append(_trace_universe(n, k) if mode == "traces" else (1 << (1 << n)) - 1)
    rng = random.Random(seed)
    total = 1
    for sp in spaces:
        total *= 1 << bin(sp).count("1")
    draws = max(1, int(total * fraction))
    sampled: set[tuple[int, ...]] = set()
    while len(sampled) < draws:
        sampled.add(tuple(_random_submask(sp, rng) for sp in spaces))
    pruned = list(searcher.run())
    kept = {tuple(_compress(searcher, m)[: size - 1]) for m in pruned}
    mismatches = []
    for prefix in sorted(sampled | kept):
        expected = unpruned_completions(n, s, prefix, config)
        got = list(searcher.run(prefix=prefix))
        if expected != got:
            mismatches.append(prefix)
    return {
        "n": n,
        "system": s.name,
        "branches_total": total,
        "branches_sampled": len(sampled),
        "branches_checked": len(sampled | kept),
        "mismatches": mismatches,
    }


def _random_submask(mask: int, rng: random.Random) -> int:
    out = 0
    for b in members(mask):
        if rng.random() < 0.5:
            out |= 1 << b
    return out


def _compress(searcher: _Searcher, m: ObModel) -> list[int]:
    if searcher.mode == "raw":
        return list(m.table)
    out = []
    for k, fam in enumerate(m.table):
        tr = 0
        for y in members(fam):
            tr |= 1 << (y & k)
        out.append(tr)
    return out
