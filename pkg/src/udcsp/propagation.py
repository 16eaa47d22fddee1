"""Arc consistency and singleton arc consistency.

Domains are int bitsets over [n].  Revision of a constraint walks the
relation's tuples once: for each tuple the candidate values of every
scope variable are the intersection of the preimages at its positions,
and a tuple is live only if every scope variable keeps a candidate.
This is exact generalized arc consistency, repeated variables included.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, List, Optional, Sequence

from .core import Constraint, Instance


class DomainVector(tuple):
    """Per-variable bitsets of surviving values."""

    def values(self, i: int) -> List[int]:
        b = self[i]
        out = []
        x = 0
        while b:
            if b & 1:
                out.append(x)
            b >>= 1
            x += 1
        return out

    def as_sets(self) -> List[set]:
        return [set(self.values(i)) for i in range(len(self))]

    def is_empty(self) -> bool:
        return any(b == 0 for b in self)

    def size(self, i: int) -> int:
        return bin(self[i]).count("1")


def full_domains(inst: Instance) -> List[int]:
    return [(1 << inst.domain_size) - 1] * inst.k


class _Prepared:
    """Preimage bitsets of each constraint, computed once per instance."""

    __slots__ = ("scope", "positions", "pre", "tuples")

    def __init__(self, c: Constraint):
        self.scope = c.scope()
        idx = {v: s for s, v in enumerate(self.scope)}
        self.positions = [idx[v] for v in c.vars]
        d = c.relation.domain_size
        self.pre = []
        for m in c.maps:
            row = [0] * d
            for x, y in enumerate(m.table):
                row[y] |= 1 << x
            self.pre.append(row)
        self.tuples = c.relation.tuples

    def revise(self, dom: List[int]) -> List[int]:
        """Supported bitsets for the scope variables under the current domains."""
        base = [dom[v] for v in self.scope]
        sup = [0] * len(self.scope)
        pos = self.positions
        pre = self.pre
        for t in self.tuples:
            cand = list(base)
            ok = True
            for j, val in enumerate(t):
                s = pos[j]
                cand[s] &= pre[j][val]
                if not cand[s]:
                    ok = False
                    break
            if ok:
                for s, b in enumerate(cand):
                    sup[s] |= b
        return sup


def prepare(inst: Instance) -> List[_Prepared]:
    return [_Prepared(c) for c in inst.constraints]


def _ac(inst: Instance, dom: List[int], prep: Sequence[_Prepared], queue: Optional[Iterable[int]] = None) -> List[int]:
    watchers: List[List[int]] = [[] for _ in range(inst.k)]
    for ci, p in enumerate(prep):
        for v in p.scope:
            watchers[v].append(ci)
    pending = deque(range(len(prep)) if queue is None else queue)
    queued = [False] * len(prep)
    for ci in pending:
        queued[ci] = True
    while pending:
        ci = pending.popleft()
        queued[ci] = False
        p = prep[ci]
        sup = p.revise(dom)
        for s, v in enumerate(p.scope):
            if sup[s] != dom[v]:
                dom[v] = sup[s]
                if not sup[s]:
                    return dom
                for cj in watchers[v]:
                    if cj != ci and not queued[cj]:
                        queued[cj] = True
                        pending.append(cj)
    return dom


def arc_consistency(inst: Instance, domains: Optional[Sequence[int]] = None, _prep=None) -> DomainVector:
    """Greatest arc-consistent sub-domain vector."""
    dom = list(domains) if domains is not None else full_domains(inst)
    if any(b == 0 for b in dom):
        return DomainVector(dom)
    prep = _prep if _prep is not None else prepare(inst)
    return DomainVector(_ac(inst, dom, prep))


def singleton_arc_consistency(inst: Instance, domains: Optional[Sequence[int]] = None, _prep=None) -> DomainVector:
    """Drop every value whose assertion makes arc consistency wipe out."""
    prep = _prep if _prep is not None else prepare(inst)
    dom = list(arc_consistency(inst, domains, prep))
    if any(b == 0 for b in dom):
        return DomainVector(dom)
    changed = True
    while changed:
        changed = False
        for i in range(inst.k):
            b = dom[i]
            x = 0
            while b >> x:
                if (dom[i] >> x) & 1:
                    trial = list(dom)
                    trial[i] = 1 << x
                    trial = _ac(inst, trial, prep)
                    if any(t == 0 for t in trial):
                        dom[i] &= ~(1 << x)
                        dom = _ac(inst, dom, prep)
                        changed = True
                        if any(t == 0 for t in dom):
                            return DomainVector(dom)
                x += 1
    return DomainVector(dom)


__all__ = ["DomainVector", "arc_consistency", "singleton_arc_consistency", "full_domains", "prepare"]
