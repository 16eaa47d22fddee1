"""Dynamic programming along a contraction sequence of the assignment graph.

A state sends each variable of a subset S to a bag alive at some moment
of the sequence; it is feasible when some assignment picking values
inside those bags satisfies every constraint within S.  Two bags without
a red edge see every label constant on their product, so a state whose
bags fall into several red components is feasible iff each component is
and one representative pair per cross-component variable pair is
permitted.  A red-connected state is resolved by splitting its youngest
bag into the two bags it was merged from.
"""

from __future__ import annotations

import itertools
import sys
import time
from typing import Dict, List, Optional, Tuple

from ..core import Instance
from ..errors import InputError
from ..width import AssignmentGraph, ContractionSequence, assignment_graph, greedy_contraction_sequence, sequence_width
from .result import SolveResult, sat, unsat

_INF = float("inf")


class _Engine:
    def __init__(self, G: AssignmentGraph, seq: ContractionSequence, weights=None):
        seq.validate()
        if seq.n != G.n:
            raise InputError(f"sequence over {seq.n} values for a graph over {G.n}")
        self.G = G
        self.n = G.n
        self.weights = weights
        self.children: Dict[int, Tuple[int, int]] = {}
        self.mask: Dict[int, int] = {i: 1 << i for i in range(G.n)}
        self.rep: Dict[int, int] = {i: i for i in range(G.n)}
        for step, (a, b) in enumerate(seq.merges):
            new = G.n + step
            self.children[new] = (a, b)
            self.mask[new] = self.mask[a] | self.mask[b]
            self.rep[new] = self.rep[a]
        self.root = G.n - 1 + len(seq.merges) if G.n > 1 else 0
        self.labels = [(v, w, G.labels[(v, w)]) for (v, w) in G.nontrivial_labels() if v < w]
        self._red: Dict[Tuple[int, int], bool] = {}
        self.memo: Dict[tuple, Tuple[float, Optional[Dict[int, int]]]] = {}

    def red(self, X: int, Y: int) -> bool:
        key = (X, Y) if X < Y else (Y, X)
        hit = self._red.get(key)
        if hit is None:
            xm, ym = self.mask[X], self.mask[Y]
            hit = any(self._mixed(M, xm, ym) or self._mixed(M, ym, xm) for _, _, M in self.labels)
            self._red[key] = hit
        return hit

    def _mixed(self, M, xm: int, ym: int) -> bool:
        """True when M is not constant on rows xm times columns ym."""
        seen = None
        for i in range(self.n):
            if xm >> i & 1:
                part = M.rows[i] & ym
                if part not in (0, ym) or (seen is not None and part != seen):
                    return True
                seen = part
        return False

    def permitted(self, v: int, x: int, w: int, y: int) -> bool:
        return bool(self.G.labels[(v, w)].get(x, y)) if v != w else x == y

    def solve(self, f: Tuple[Tuple[int, int], ...]) -> Tuple[float, Optional[Dict[int, int]]]:
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        out = self._solve(f)
        self.memo[f] = out
        return out

    def _cost(self, v: int, x: int) -> int:
        return self.weights[v][x] if self.weights is not None else 0

    def _solve(self, f):
        bags = sorted({b for _, b in f})
        if all(b < self.n for b in bags):
            for v, x in f:
                if not (self.G.unary[v] >> x) & 1:
                    return _INF, None
            for (v, x), (w, y) in itertools.combinations(f, 2):
                if not self.permitted(v, x, w, y):
                    return _INF, None
            return float(sum(self._cost(v, x) for v, x in f)), dict(f)
        comps = self._components(bags)
        if len(comps) > 1:
            where = {b: ci for ci, comp in enumerate(comps) for b in comp}
            parts: List[List[Tuple[int, int]]] = [[] for _ in comps]
            for v, b in f:
                parts[where[b]].append((v, b))
            for P, Q in itertools.combinations(parts, 2):
                for v, b in P:
                    for w, c in Q:
                        if not self.permitted(v, self.rep[b], w, self.rep[c]):
                            return _INF, None
            total, wit = 0.0, {}
            for P in parts:
                cost, sub = self.solve(tuple(P))
                if sub is None:
                    return _INF, None
                total += cost
                wit.update(sub)
            return total, wit
        young = bags[-1]
        b1, b2 = self.children[young]
        inside = [v for v, b in f if b == young]
        rest = [(v, b) for v, b in f if b != young]
        best: Tuple[float, Optional[Dict[int, int]]] = (_INF, None)
        for pick in itertools.product((b1, b2), repeat=len(inside)):
            g = tuple(sorted(rest + list(zip(inside, pick))))
            cost, wit = self.solve(g)
            if wit is not None and cost < best[0]:
                best = (cost, wit)
                if self.weights is None:
                    break
        return best

    def _components(self, bags: List[int]) -> List[List[int]]:
        comps: List[List[int]] = []
        left = list(bags)
        while left:
            stack = [left.pop()]
            comp = []
            while stack:
                x = stack.pop()
                comp.append(x)
                keep = []
                for y in left:
                    (stack if self.red(x, y) else keep).append(y)
                left = keep
            comps.append(comp)
        return comps


def _run(inst: Instance, seq: Optional[ContractionSequence], weighted: bool, name: str) -> SolveResult:
    t0 = time.perf_counter()
    G = assignment_graph(inst)
    if seq is None:
        seq, width = greedy_contraction_sequence(G)
    else:
        width = sequence_width(G, seq)
    eng = _Engine(G, seq, inst.weights if weighted else None)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20 * (G.n + inst.k) + 1000))
    try:
        if inst.k == 0:
            cost, wit = 0.0, {}
        else:
            cost, wit = eng.solve(tuple((v, eng.root) for v in range(inst.k)))
    finally:
        sys.setrecursionlimit(old)
    stats = {"width": width, "states": len(eng.memo), "seconds": time.perf_counter() - t0}
    if wit is None:
        return unsat(name, **stats)
    res = sat([wit[v] for v in range(inst.k)], name, **stats)
    if weighted:
        res.weight = int(cost)
    return res.verify(inst)


def solve_twinwidth_dp(inst: Instance, seq: Optional[ContractionSequence] = None) -> SolveResult:
    """Exact solver for instances whose constraints touch at most two variables."""
    return _run(inst, seq, False, "twinwidth")


def solve_twinwidth_dp_weighted(inst: Instance, seq: Optional[ContractionSequence] = None) -> SolveResult:
    """Minimum total weight solution; zero weights when the instance has none."""
    return _run(inst, seq, True, "twinwidth-weighted")
