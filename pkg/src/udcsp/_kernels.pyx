# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) rank and grid-division search for matrices up to 64 bits wide."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

cdef int _top(uint64_t v) nogil:
    cdef int h = 63
    while not (v >> h) & 1:
        h -= 1
    return h


cdef bint _insert(uint64_t* basis, uint64_t v) nogil:
    cdef int h
    while v:
        h = _top(v)
        if basis[h] == 0:
            basis[h] = v
            return True
        v ^= basis[h]
    return False


def gf2_rank(rows):
    """Rank over GF(2) of rows packed as ints below 2**64."""
    cdef uint64_t basis[64]
    cdef int i, rank = 0
    for i in range(64):
        basis[i] = 0
    for r in rows:
        if _insert(basis, <uint64_t>r):
            rank += 1
    return rank


cdef bint _greedy(uint64_t* cols, int ncols, uint64_t* blocks, int k, int* ccuts) nogil:
    cdef uint64_t* bases = <uint64_t*>malloc(64 * k * sizeof(uint64_t))
    cdef int* ranks = <int*>malloc(k * sizeof(int))
    cdef int c = 0, e, j, i, low
    cdef bint last, ok = True
    for j in range(k):
        for i in range(64 * k):
            bases[i] = 0
        for i in range(k):
            ranks[i] = 0
        last = j == k - 1
        e = c
        while e < ncols:
            for i in range(k):
                if ranks[i] < k and _insert(bases + 64 * i, cols[e] & blocks[i]):
                    ranks[i] += 1
            e += 1
            if not last:
                low = k
                for i in range(k):
                    if ranks[i] < low:
                        low = ranks[i]
                if low >= k:
                    break
        low = k
        for i in range(k):
            if ranks[i] < low:
                low = ranks[i]
        if low < k:
            ok = False
            break
        if not last:
            ccuts[j] = e
        c = e
    free(bases)
    free(ranks)
    return ok


cdef bint _rows(uint64_t* cols, int ncols, int nrows, int k, int depth, int start,
                int* rcuts, int* ccuts, uint64_t* blocks) nogil:
    cdef int cut, i
    cdef uint64_t lo, hi
    if depth == k - 1:
        if nrows - start < k:
            return False
        rcuts[depth] = nrows
        lo = 0
        for i in range(k):
            hi = 0xFFFFFFFFFFFFFFFF if rcuts[i] == 64 else ((<uint64_t>1 << rcuts[i]) - 1)
            blocks[i] = hi ^ lo
            lo = hi
        return _greedy(cols, ncols, blocks, k, ccuts)
    for cut in range(start + k, nrows - k * (k - 1 - depth) + 1):
        rcuts[depth] = cut
        if _rows(cols, ncols, nrows, k, depth + 1, cut, rcuts, ccuts, blocks):
            return True
    return False


def division_exists(cols, int nrows, int k):
    """Same contract as the pure-Python version; needs nrows <= 64."""
    cdef int ncols = len(cols)
    cdef int i
    if k == 1:
        return ([], []) if any(cols) else None
    if nrows < k * k or ncols < k * k:
        return None
    cdef uint64_t* cbuf = <uint64_t*>malloc(ncols * sizeof(uint64_t))
    cdef int* rcuts = <int*>malloc(k * sizeof(int))
    cdef int* ccuts = <int*>malloc(k * sizeof(int))
    cdef uint64_t* blocks = <uint64_t*>malloc(k * sizeof(uint64_t))
    for i in range(ncols):
        cbuf[i] = <uint64_t>cols[i]
    try:
        if _rows(cbuf, ncols, nrows, k, 0, 0, rcuts, ccuts, blocks):
            return [rcuts[i] for i in range(k - 1)], [ccuts[i] for i in range(k - 1)]
        return None
    finally:
        free(cbuf)
        free(rcuts)
        free(ccuts)
        free(blocks)
