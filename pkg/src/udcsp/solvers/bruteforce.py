"""Exhaustive oracle over [n]^k, vectorised with numpy."""

from __future__ import annotations

import time

import numpy as np

from .. import budget
from ..core import Constraint, Instance, Relation
from ..errors import InputError
from .result import SolveResult, sat, unsat


def _constraint_table(c: Constraint, n: int):
    """Boolean table of c over [n]^{scope}, axes in scope order."""
    scope = c.scope()
    idx = {v: s for s, v in enumerate(scope)}
    grids = np.indices((n,) * len(scope)).reshape(len(scope), -1)
    d = c.relation.domain_size
    code = np.zeros(grids.shape[1], dtype=np.int64)
    for v, m in zip(c.vars, c.maps):
        code = code * d + np.asarray(m.table, dtype=np.int64)[grids[idx[v]]]
    lut = np.zeros(d ** c.relation.arity, dtype=bool)
    for t in c.relation:
        lut[c.relation.code(t)] = True
    return scope, lut[code].reshape((n,) * len(scope))


def satisfying_array(inst: Instance) -> np.ndarray:
    """Boolean array of shape (n,)*k marking solutions (axis i = variable i)."""
    n, k = inst.domain_size, inst.k
    budget.check("bruteforce", float(n) ** k, "brute-force assignments")
    arr = np.ones((n,) * k, dtype=bool)
    for c in inst.constraints:
        scope, tab = _constraint_table(c, n)
        order = sorted(range(len(scope)), key=lambda s: scope[s])
        tab = np.transpose(tab, order)
        shape = [1] * k
        for v in scope:
            shape[v] = n
        arr &= tab.reshape(shape)
    return arr


def count_solutions(inst: Instance) -> int:
    return int(satisfying_array(inst).sum())


def all_solutions(inst: Instance):
    arr = satisfying_array(inst)
    return [tuple(int(x) for x in t) for t in np.argwhere(arr)]


def solve_bruteforce(inst: Instance) -> SolveResult:
    """Lexicographically smallest solution, or unsat."""
    t0 = time.perf_counter()
    arr = satisfying_array(inst)
    count = int(arr.sum())
    stats = {"nodes": int(arr.size), "solutions": count}
    if count == 0:
        return unsat("oracle", seconds=time.perf_counter() - t0, **stats)
    first = np.unravel_index(int(np.argmax(arr.reshape(-1))), arr.shape) if inst.k else ()
    return sat(first, "oracle", seconds=time.perf_counter() - t0, **stats)


def solve_bruteforce_weighted(inst: Instance) -> SolveResult:
    """Minimum-weight solution by enumeration."""
    arr = satisfying_array(inst)
    n, k = inst.domain_size, inst.k
    w = np.zeros((n,) * k, dtype=np.int64)
    if inst.weights is not None:
        for v in range(k):
            shape = [1] * k
            shape[v] = n
            w = w + np.asarray(inst.weights[v], dtype=np.int64).reshape(shape)
    if not arr.any():
        return unsat("oracle-weighted")
    masked = np.where(arr, w, np.iinfo(np.int64).max)
    flat = int(np.argmin(masked.reshape(-1)))
    best = np.unravel_index(flat, arr.shape) if k else ()
    res = sat(best, "oracle-weighted")
    res.weight = int(masked.reshape(-1)[flat])
    return res


def solution_projection(inst: Instance, vi: int, vj: int) -> Relation:
    """{(a,b) : some solution has v_i = a and v_j = b}."""
    if vi == vj or not (0 <= vi < inst.k and 0 <= vj < inst.k):
        raise InputError("projection needs two distinct existing variables")
    arr = satisfying_array(inst)
    others = tuple(a for a in range(inst.k) if a not in (vi, vj))
    proj = arr.any(axis=others) if others else arr
    if vi > vj:
        proj = proj.T
    pairs = [tuple(int(x) for x in p) for p in np.argwhere(proj)]
    return Relation(f"pi_{inst.variables[vi]},{inst.variables[vj]}", inst.domain_size, 2, pairs)
