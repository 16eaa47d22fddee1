"""Solvers for instances whose maps are all one-hot brackets [x = a].

Inside this module the extra value bottom (written as the sentinel n) marks
a variable left unassigned; it is mapped to 0 by every bracket.  Nothing
outside the module accepts it.
"""

from __future__ import annotations

import itertools
import time
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from ..core import Instance, Relation, restrict_relation
from ..definability import or2_definable
from ..errors import PreconditionError
from ..patterns import check_weak_separability
from .result import SolveResult, sat, unsat

# (relation, variables, hot values)
_Con = Tuple[Relation, Tuple[int, ...], Tuple[int, ...]]


def _hots(inst: Instance) -> List[_Con]:
    out = []
    for c in inst.constraints:
        if c.relation.domain_size != 2 or not all(m.is_onehot() for m in c.maps):
            raise PreconditionError("one-hot solvers need Boolean relations under one-hot maps")
        out.append((c.relation, tuple(c.vars), tuple(m.table.index(1) for m in c.maps)))
    return out


def bottom(inst: Instance) -> int:
    """The sentinel used for an unassigned variable."""
    return inst.domain_size


def eval_with_bottom(inst: Instance, a: Sequence[int]) -> bool:
    """Truth of inst under an assignment into [n] u {bottom}."""
    for R, vs, hs in _hots(inst):
        if tuple(int(a[v] == h) for v, h in zip(vs, hs)) not in R:
            return False
    return True


# ---------------------------------------------------------------- 2-SAT route

def _two_sat(n_vars: int, clauses: List[Tuple[int, ...]]) -> Optional[List[bool]]:
    """Literals are 2*i (x_i) and 2*i+1 (not x_i); clauses have one or two literals."""
    G = nx.DiGraph()
    G.add_nodes_from(range(2 * n_vars))
    for cl in clauses:
        if len(cl) == 1:
            G.add_edge(cl[0] ^ 1, cl[0])
        else:
            a, b = cl
            G.add_edge(a ^ 1, b)
            G.add_edge(b ^ 1, a)
    C = nx.condensation(G)
    order = {c: i for i, c in enumerate(nx.topological_sort(C))}
    comp = C.graph["mapping"]
    val = []
    for i in range(n_vars):
        p, q = order[comp[2 * i]], order[comp[2 * i + 1]]
        if p == q:
            return None
        val.append(p > q)
    return val


def solve_onehot_2sat(inst: Instance) -> SolveResult:
    """Reduction to 2-SAT when every relation has a definition in Or2, 0 and 1.

    One propositional variable p(x,a) per bracket used; brackets on the same
    variable exclude each other in pairs.  When a model leaves all brackets
    of x false, x takes a value that no bracket mentions, or failing that a
    value whose bracket is not explicitly forced false; setting that bracket
    true breaks nothing, because the only negative literals are the unit
    zeros and the pairwise exclusions.
    """
    t0 = time.perf_counter()
    cons = _hots(inst)
    defs = {}
    for R in {c[0] for c in cons}:
        F = or2_definable(R)
        if F is None:
            raise PreconditionError(f"{R.name} has no definition in Or2 and constants")
        defs[R] = F
    ids: Dict[Tuple[int, int], int] = {}

    def lit(v, a):
        return 2 * ids.setdefault((v, a), len(ids))

    clauses: List[Tuple[int, ...]] = []
    forced_false = set()
    for R, vs, hs in cons:
        for atom in defs[R].atoms:
            ls = [lit(vs[i], hs[i]) for i in atom.index]
            name = atom.relation.name
            if name == "Or2":
                clauses.append((ls[0], ls[1]))
            elif name == "One":
                clauses.append((ls[0],))
            else:
                clauses.append((ls[0] ^ 1,))
                forced_false.add((vs[atom.index[0]], hs[atom.index[0]]))
    by_var: Dict[int, List[int]] = {}
    for (v, a) in list(ids):
        by_var.setdefault(v, []).append(a)
    for v, hs in by_var.items():
        for a, b in itertools.combinations(sorted(hs), 2):
            clauses.append((lit(v, a) ^ 1, lit(v, b) ^ 1))
    model = _two_sat(len(ids), clauses)
    stats = {"brackets": len(ids), "clauses": len(clauses)}
    if model is None:
        return unsat("onehot2sat", seconds=time.perf_counter() - t0, **stats)
    n = inst.domain_size
    a = [0] * inst.k
    for v in range(inst.k):
        hs = by_var.get(v, [])
        on = [h for h in hs if model[ids[(v, h)]]]
        if on:
            a[v] = on[0]
            continue
        spare = [x for x in range(n) if x not in set(hs)]
        if spare:
            a[v] = spare[0]
            continue
        free = [h for h in sorted(hs) if (v, h) not in forced_false]
        if not free:
            return unsat("onehot2sat", seconds=time.perf_counter() - t0, **stats)
        a[v] = free[0]
    return sat(a, "onehot2sat", seconds=time.perf_counter() - t0, **stats).verify(inst)


# ---------------------------------------------------------------- FPT route

@lru_cache(maxsize=65536)
def _restrict(R: Relation, i: int, b: int):
    return restrict_relation(R, i, b)


def _substitute(cons: Sequence[_Con], fixed: Dict[int, int]) -> Optional[List[_Con]]:
    """Plug in the bracket values of fixed variables; None if some constraint dies."""
    out = []
    for R, vs, hs in cons:
        if not any(v in fixed for v in vs):
            out.append((R, vs, hs))
            continue
        cur = R
        keep_v, keep_h = list(vs), list(hs)
        for pos in range(len(vs) - 1, -1, -1):
            v = vs[pos]
            if v in fixed:
                cur = _restrict(cur, pos + 1, int(fixed[v] == hs[pos]))
                del keep_v[pos], keep_h[pos]
                if isinstance(cur, bool):
                    break
        if isinstance(cur, bool):
            if not cur:
                return None
            continue
        if len(cur) == 0:
            return None
        out.append((cur, tuple(keep_v), tuple(keep_h)))
    return out


def _satisfies(cons: Sequence[_Con], g: Dict[int, int]) -> bool:
    return all(tuple(int(g.get(v) == h) for v, h in zip(vs, hs)) in R for R, vs, hs in cons)


def _minimal(cons: Sequence[_Con], free: Sequence[int], n: int, every_value: bool) -> List[Dict[int, int]]:
    """Minimal non-trivial satisfying partial assignments of a 0-valid system."""
    hot: Dict[int, set] = {v: set() for v in free}
    for _, vs, hs in cons:
        for v, h in zip(vs, hs):
            if v in hot:
                hot[v].add(h)
    found: Dict[frozenset, Dict[int, int]] = {}
    seen = set()

    def extend(g: Dict[int, int]) -> None:
        key = frozenset(g.items())
        if key in seen:
            return
        seen.add(key)
        bad = next((c for c in cons if tuple(int(g.get(v) == h) for v, h in zip(c[1], c[2])) not in c[0]), None)
        if bad is None:
            found[key] = dict(g)
            return
        for v, h in zip(bad[1], bad[2]):
            if v not in g:
                g[v] = h
                extend(g)
                del g[v]

    for v in free:
        starts = sorted(hot[v])
        cold = [x for x in range(n) if x not in hot[v]]
        starts += cold if every_value else cold[:1]
        for a in starts:
            extend({v: a})
    out = []
    for key, g in found.items():
        items = list(g.items())
        minimal = True
        for size in range(1, len(items)):
            for sub in itertools.combinations(items, size):
                if _satisfies(cons, dict(sub)):
                    minimal = False
                    break
            if not minimal:
                break
        if minimal:
            out.append(g)
    return out


def enumerate_minimal_assignments(inst: Instance) -> List[Tuple[int, ...]]:
    """Minimal satisfying assignments into [n] u {bottom} (bottom = n).

    Requires every relation to be 0-valid, so that the all-bottom assignment
    satisfies the instance.
    """
    cons = _hots(inst)
    for R, _, _ in cons:
        if (0,) * R.arity not in R:
            raise PreconditionError(f"{R.name} is not 0-valid")
    n = inst.domain_size
    res = []
    for g in _minimal(cons, range(inst.k), n, every_value=True):
        res.append(tuple(g.get(v, n) for v in range(inst.k)))
    return sorted(set(res))


def _exact_cover(free: Sequence[int], pieces: List[Dict[int, int]]) -> Optional[Dict[int, int]]:
    pos = {v: i for i, v in enumerate(free)}
    full = (1 << len(free)) - 1
    by_low: Dict[int, List[Tuple[int, int]]] = {}
    masks = {}
    for j, g in enumerate(pieces):
        m = 0
        for v in g:
            m |= 1 << pos[v]
        if m in masks:
            continue
        masks[m] = j
        for i in range(len(free)):
            if m >> i & 1:
                by_low.setdefault(i, []).append((m, j))
                break
    parent: Dict[int, Tuple[int, int]] = {0: (-1, -1)}
    stack = [0]
    while stack:
        cur = stack.pop()
        if cur == full:
            break
        low = (~cur & full & -(~cur & full)).bit_length() - 1
        for m, j in by_low.get(low, ()):
            if m & cur == 0 and (cur | m) not in parent:
                parent[cur | m] = (cur, j)
                stack.append(cur | m)
    if full not in parent:
        return None
    out: Dict[int, int] = {}
    cur = full
    while cur:
        prev, j = parent[cur]
        out.update(pieces[j])
        cur = prev
    return out


def solve_onehot_fpt(inst: Instance) -> SolveResult:
    """Parameterized solver for weakly separable languages.

    Branch on a bracket of some constraint that is not 0-valid until all
    are; then the remaining variables are covered exactly by disjoint
    minimal assignments, found by a subset DP over the free variables.
    """
    t0 = time.perf_counter()
    cons = _hots(inst)
    for R in {c[0] for c in cons}:
        if not check_weak_separability(R):
            raise PreconditionError(f"{R.name} is not weakly separable")
    n = inst.domain_size
    stats = {"branches": 0, "leaves": 0, "minimal": 0}

    def branch(live: List[_Con], fixed: Dict[int, int]) -> Optional[Dict[int, int]]:
        stats["branches"] += 1
        target = next((c for c in live if (0,) * c[0].arity not in c[0]), None)
        if target is None:
            stats["leaves"] += 1
            free = [v for v in range(inst.k) if v not in fixed]
            pieces = _minimal(live, free, n, every_value=False)
            stats["minimal"] += len(pieces)
            cover = _exact_cover(free, pieces)
            if cover is None:
                return None
            return {**fixed, **cover}
        for v, h in zip(target[1], target[2]):
            nxt = dict(fixed)
            nxt[v] = h
            sub = _substitute(live, {v: h})
            if sub is None:
                continue
            got = branch(sub, nxt)
            if got is not None:
                return got
        return None

    start = _substitute(cons, {})
    found = branch(start, {}) if start is not None else None
    stats["seconds"] = time.perf_counter() - t0
    if found is None:
        return unsat("onehotfpt", **stats)
    return sat([found[v] for v in range(inst.k)], "onehotfpt", **stats).verify(inst)
