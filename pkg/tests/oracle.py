"""Brute-force reference semantics, written without the package's helpers.

Tables are numpy arrays of shape (N, 2**n): row i is one candidate ob
function, column x the family of context x as a bitmask over subsets.
Every axiom is evaluated instance by instance over all (x, y, z).
"""

from __future__ import annotations

import numpy as np


def all_tables(n: int) -> np.ndarray:
    """Every table over n worlds, in lexicographic order (context 0 most significant)."""
    size = 1 << n
    width = 1 << size
    count = width**size
    idx = np.arange(count, dtype=np.int64)
    cols = [(idx >> (size * (size - 1 - k))) & (width - 1) for k in range(size)]
    return np.stack(cols, axis=1)


def _has(t: np.ndarray, x: int, y: int) -> np.ndarray:
    return ((t[:, x] >> y) & 1).astype(bool)


def _sub(a: int, b: int) -> bool:
    return a & ~b == 0


def holds(t: np.ndarray, n: int, axiom: str) -> np.ndarray:
    size = 1 << n
    w = size - 1
    ok = np.ones(len(t), dtype=bool)
    R = range(size)
    if axiom == "5a":
        for x in R:
            ok &= ~_has(t, x, 0)
    elif axiom == "5b":
        for x in R:
            for y in R:
                for z in R:
                    if y & x == z & x:
                        ok &= ~_has(t, x, y) | _has(t, x, z)
    elif axiom in ("5c", "5c-"):
        for x in R:
            for y in R:
                for z in R:
                    if axiom == "5c-" and not (x & y & z):
                        continue
                    ok &= ~(_has(t, x, y) & _has(t, x, z)) | _has(t, x, y & z)
    elif axiom == "5d":
        for x in R:
            for y in R:
                for z in R:
                    if _sub(x, z):
                        ok &= ~_has(t, x, y) | _has(t, z, (z & ~x & w) | y)
    elif axiom == "5e":
        for x in R:
            for y in R:
                for z in R:
                    if _sub(y, x) and y & z:
                        ok &= ~_has(t, x, z) | _has(t, y, z)
    elif axiom == "5f":
        for x in R:
            for y in R:
                for z in R:
                    ok &= ~(_has(t, y, x) & _has(t, z, x)) | _has(t, y | z, x)
    else:
        raise KeyError(axiom)
    return ok


def models(n: int, axioms: list[str], tables: np.ndarray | None = None) -> list[tuple[int, ...]]:
    t = all_tables(n) if tables is None else tables
    ok = np.ones(len(t), dtype=bool)
    for a in axioms:
        ok &= holds(t, n, a)
    return [tuple(int(v) for v in row) for row in t[ok]]


def single(table: tuple[int, ...], n: int, axiom: str) -> bool:
    return bool(holds(np.array([table], dtype=np.int64), n, axiom)[0])


def ought(table: tuple[int, ...], a: int, b: int) -> bool:
    """Ought(a|b) straight from its definition: a ∈ ob(x) for all x ⊆ b with x ∩ a ≠ ∅."""
    return all(table[x] >> a & 1 for x in range(len(table)) if _sub(x, b) and x & a)
