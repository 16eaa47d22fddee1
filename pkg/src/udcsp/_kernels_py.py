"""Pure-Python versions of the hot loops (GF(2) rank and grid divisions).

Rows and columns are packed into Python ints, bit j = entry j.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank over GF(2) of packed rows."""
    basis: dict = {}
    rank = 0
    for r in rows:
        if _insert(basis, r):
            rank += 1
    return rank


def _insert(basis: dict, v: int) -> bool:
    """Reduce v against a basis keyed by leading bit; add it if independent."""
    while v:
        h = v.bit_length() - 1
        b = basis.get(h)
        if b is None:
            basis[h] = v
            return True
        v ^= b
    return False


def _greedy_columns(cols: Sequence[int], blocks: Sequence[int], k: int) -> Optional[List[int]]:
    """Column cuts making every zone of rank >= k, given row blocks as masks."""
    ncols = len(cols)
    cuts = []
    c = 0
    for j in range(k):
        bases = [{} for _ in blocks]
        ranks = [0] * len(blocks)
        last = j == k - 1
        e = c
        while e < ncols:
            v = cols[e]
            for i, m in enumerate(blocks):
                if ranks[i] < k and _insert(bases[i], v & m):
                    ranks[i] += 1
            e += 1
            if not last and min(ranks) >= k:
                break
        if min(ranks) < k:
            return None
        if not last:
            cuts.append(e)
        c = e
    return cuts


def _compositions(total: int, parts: int, least: int):
    """Cut positions of ``total`` rows into ``parts`` blocks each at least ``least`` long."""
    def rec(start: int, left: int):
        if left == 1:
            if total - start >= least:
                yield []
            return
        for cut in range(start + least, total - least * (left - 1) + 1):
            for rest in rec(cut, left - 1):
                yield [cut] + rest
    yield from rec(0, parts)


def division_exists(cols: Sequence[int], nrows: int, k: int) -> Optional[Tuple[List[int], List[int]]]:
    """Find a k-division whose zones all have rank >= k; returns (row cuts, column cuts)."""
    ncols = len(cols)
    if k == 1:
        return ([], []) if any(cols) else None
    if nrows < k * k or ncols < k * k:
        return None
    for rcuts in _compositions(nrows, k, k):
        bounds = [0] + rcuts + [nrows]
        blocks = [((1 << bounds[i + 1]) - 1) ^ ((1 << bounds[i]) - 1) for i in range(k)]
        ccuts = _greedy_columns(cols, blocks, k)
        if ccuts is not None:
            return rcuts, ccuts
    return None
