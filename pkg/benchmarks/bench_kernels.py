"""Compiled kernels against their Python twins on random bit matrices.

Run: python3 benchmarks/bench_kernels.py [--reps N] [--seed S]
"""

from __future__ import annotations

import argparse
import random
import timeit

from udcsp import _kernels_py as py
from udcsp import kernels


def random_rows(rng, nrows, ncols, density=0.5):
    return [sum(1 << j for j in range(ncols) if rng.random() < density) for _ in range(nrows)]


def block_identity(k, size):
    """k x k blocks, each an identity of the given size: grid-rank k with division rank size."""
    n = k * size
    rows = []
    for i in range(n):
        rows.append(sum(1 << (b * size + i % size) for b in range(k)))
    return rows, n


def columns(rows, nrows, ncols):
    return [sum(((rows[i] >> j) & 1) << i for i in range(nrows)) for j in range(ncols)]


def bench(label, fn_c, fn_py, reps):
    tc = min(timeit.repeat(fn_c, number=reps, repeat=3)) / reps
    tp = min(timeit.repeat(fn_py, number=reps, repeat=3)) / reps
    print(f"{label:<34} cython {tc * 1e6:10.1f} us   python {tp * 1e6:10.1f} us   speedup {tp / tc:6.1f}x")


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return 1
    c = kernels.compiled
    rng = random.Random(args.seed)
    for n in (16, 32, 64):
        rows = random_rows(rng, n, n)
        assert c.gf2_rank(rows) == py.gf2_rank(rows)
        bench(f"gf2_rank {n}x{n}", lambda: c.gf2_rank(rows), lambda: py.gf2_rank(rows), args.reps * 10)
    for k, size in ((2, 4), (3, 3), (2, 8), (4, 4)):
        rows, n = block_identity(k, size)
        cols = columns(rows, n, n)
        assert c.division_exists(cols, n, k) == py.division_exists(cols, n, k)
        bench(f"division_exists {n}x{n} k={k}", lambda: c.division_exists(cols, n, k),
              lambda: py.division_exists(cols, n, k), args.reps)
    for n, k in ((24, 2), (32, 3)):
        rows = random_rows(rng, n, n, 0.3)
        cols = columns(rows, n, n)
        assert c.division_exists(cols, n, k) == py.division_exists(cols, n, k)
        bench(f"division_exists random {n}x{n} k={k}", lambda: c.division_exists(cols, n, k),
              lambda: py.division_exists(cols, n, k), args.reps)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
