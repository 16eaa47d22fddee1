"""Re-encode constraints on at most two variables as binary relations."""

from __future__ import annotations

import itertools
from typing import Dict, List

from ..core import Constraint, Instance, Relation, UnaryMap
from ..errors import InputError


def _classes(maps: List[UnaryMap], n: int) -> List[int]:
    """Index of the maximal interval on which every map is constant."""
    cls, cur = [0] * n, 0
    for x in range(1, n):
        if any(m.table[x] != m.table[x - 1] for m in maps):
            cur += 1
        cls[x] = cur
    return cls


def binarize_constraint(c: Constraint, n: int) -> Constraint:
    scope = c.scope()
    if len(scope) > 2:
        raise InputError(f"constraint on {len(scope)} variables cannot be binarized")
    occ: Dict[int, List[int]] = {v: [j for j, u in enumerate(c.vars) if u == v] for v in scope}
    cls = {v: _classes([c.maps[j] for j in occ[v]], n) for v in scope}
    rep = {v: {} for v in scope}
    for v in scope:
        for x in range(n):
            rep[v].setdefault(cls[v][x], x)
    D = max(c.relation.domain_size * c.relation.arity, max(max(cls[v]) + 1 for v in scope))
    tuples = []
    for combo in itertools.product(*(sorted(rep[v]) for v in scope)):
        a = {v: rep[v][q] for v, q in zip(scope, combo)}
        if tuple(m.table[a[v]] for v, m in zip(c.vars, c.maps)) in c.relation:
            tuples.append(combo)
    R = Relation(f"bin({c.relation.name})", D, len(scope), tuples)
    maps = tuple(UnaryMap.from_table(cls[v], D) for v in scope)
    return Constraint(R, scope, maps)


def binarize_instance(inst: Instance) -> Instance:
    """Equivalent instance whose relations have arity at most two and monotone maps.

    Each variable's occurrences split [n] into at most d*r intervals; the new
    relation lists the permitted pairs of interval indices.
    """
    return inst.with_constraints(binarize_constraint(c, inst.domain_size) for c in inst.constraints)
