"""Polymorphism patterns and preservation checks.

A pattern is a partial multivalued operation on an abstract ordered
domain [p].  Interpreting it over [d] through a map family takes the
union of its images under every family map [p] -> [d].  Concrete
multifunctions are stored sparsely: only inputs with a nonempty output
are kept, outputs as bitsets over [d].
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import MapFamilyKind, Relation, enumerate_tables, relation_projection
from .errors import InputError, InternalError

Tup = Tuple[int, ...]


@dataclass(frozen=True)
class Pattern:
    name: str
    arity: int
    pattern_domain_size: int
    entries: frozenset  # of (input tuple, output)

    @classmethod
    def build(cls, name: str, p: int, entries: Iterable[Tuple[Sequence[int], int]]) -> "Pattern":
        ents = frozenset((tuple(u), int(o)) for u, o in entries)
        arities = {len(u) for u, _ in ents}
        if len(arities) != 1:
            raise InputError("pattern entries must share one arity")
        for u, o in ents:
            if not all(0 <= v < p for v in u) or not 0 <= o < p:
                raise InputError("pattern entry outside its domain")
        return cls(name, arities.pop(), p, ents)


MIN = Pattern.build("min", 2, [((0, 1), 0), ((1, 0), 0)])
MAX = Pattern.build("max", 2, [((0, 1), 1), ((1, 0), 1)])
MEDIAN = Pattern.build("median", 3, [(perm, 1) for perm in itertools.permutations(range(3))])
CONNECTOR = Pattern.build("connector", 3, [((0, 0, 1, 2, 2), 0), ((0, 2, 1, 0, 2), 1)])


class ConcreteMultifunction:
    """k-ary partial multifunction on [d]; missing inputs are undefined."""

    __slots__ = ("arity", "domain", "table")

    def __init__(self, arity: int, domain: int, table: Optional[Dict[Tup, int]] = None):
        self.arity = arity
        self.domain = domain
        self.table: Dict[Tup, int] = dict(table or {})

    def add(self, u: Tup, out: int) -> None:
        self.table[u] = self.table.get(u, 0) | (1 << out)

    def __call__(self, *args) -> frozenset:
        if len(args) == 1 and isinstance(args[0], tuple):
            args = args[0]
        b = self.table.get(tuple(args), 0)
        return frozenset(v for v in range(self.domain) if (b >> v) & 1)

    def defined(self) -> List[Tup]:
        return sorted(self.table)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConcreteMultifunction):
            return NotImplemented
        return (self.arity, self.domain, self.table) == (other.arity, other.domain, other.table)

    def __repr__(self) -> str:
        return f"ConcreteMultifunction(k={self.arity}, d={self.domain}, |dom|={len(self.table)})"


@dataclass(frozen=True)
class BooleanPartialOp:
    name: str
    arity: int
    entries: Tuple[Tuple[Tup, int], ...]

    def as_multifunction(self) -> ConcreteMultifunction:
        f = ConcreteMultifunction(self.arity, 2)
        for u, o in self.entries:
            f.add(u, o)
        return f


F_NAND = BooleanPartialOp("f_Nand", 3, (((0, 0, 0), 0), ((0, 0, 1), 1), ((0, 1, 0), 1), ((1, 1, 1), 1)))
G_IMPL = BooleanPartialOp("g_Impl", 3, (((0, 0, 0), 0), ((0, 1, 1), 0), ((0, 0, 1), 1), ((1, 1, 1), 1)))


def interpret_pattern(P: Pattern, d: int, family: MapFamilyKind) -> ConcreteMultifunction:
    """Concrete homomorphic image of P over [d]."""
    f = ConcreteMultifunction(P.arity, d)
    if family is MapFamilyKind.ONEHOT:
        raise InputError("patterns are interpreted through Mo, Mo', Mo u Mo', Id or All")
    if family is MapFamilyKind.ID:
        if d == P.pattern_domain_size:
            for u, o in P.entries:
                f.add(u, o)
        return f
    for m in enumerate_tables(P.pattern_domain_size, d, family):
        for u, o in P.entries:
            f.add(tuple(m[v] for v in u), m[o])
    return f


@dataclass
class Witness:
    inputs: Tuple[Tup, ...]
    output: Tup

    def as_json(self) -> dict:
        return {"inputs": [list(t) for t in self.inputs], "output": list(self.output)}


def apply_to_tuples(f: ConcreteMultifunction, tuples: Sequence[Tup]) -> List[Tup]:
    """All output tuples of f applied coordinatewise (empty if some coordinate is undefined)."""
    cols = list(zip(*tuples))
    outs = [f(c) for c in cols]
    return [tuple(o) for o in itertools.product(*[sorted(s) for s in outs])]


def preserves(R: Relation, f: ConcreteMultifunction) -> Tuple[bool, Optional[Witness]]:
    """Check f(t_1..t_k) is inside R for all t_i in R.

    Search goes column by column: each coordinate picks a defined input
    of f and the partial rows must stay prefixes of tuples of R.
    """
    if f.domain != R.domain_size:
        raise InputError(f"multifunction over [{f.domain}] tested on a relation over [{R.domain_size}]")
    k, r = f.arity, R.arity
    if not f.table:
        return True, None
    prefixes = [set() for _ in range(r + 1)]
    for t in R:
        for j in range(r + 1):
            prefixes[j].add(t[:j])
    inputs = f.defined()
    outs = {u: sorted(f(u)) for u in inputs}
    rows: List[Tup] = [()] * k
    chosen: List[Tup] = []

    def rec(j: int) -> Optional[Witness]:
        if j == r:
            for o in itertools.product(*[outs[u] for u in chosen]):
                if o not in R:
                    return Witness(tuple(rows), tuple(o))
            return None
        nxt = prefixes[j + 1]
        for u in inputs:
            new = [rows[i] + (u[i],) for i in range(k)]
            if all(x in nxt for x in new):
                saved = list(rows)
                rows[:] = new
                chosen.append(u)
                w = rec(j + 1)
                chosen.pop()
                rows[:] = saved
                if w is not None:
                    return w
        return None

    w = rec(0)
    return w is None, w


def preserves_naive(R: Relation, f: ConcreteMultifunction) -> bool:
    """Direct loop over all k-tuples of R; kept as an oracle for ``preserves``."""
    for ts in itertools.product(R.tuples, repeat=f.arity):
        for o in apply_to_tuples(f, ts):
            if o not in R:
                return False
    return True


def m_preserves(gamma: Iterable[Relation], P: Pattern, family: MapFamilyKind) -> Tuple[bool, Optional[dict]]:
    cache: Dict[int, ConcreteMultifunction] = {}
    for R in _as_relations(gamma):
        f = cache.get(R.domain_size)
        if f is None:
            f = cache[R.domain_size] = interpret_pattern(P, R.domain_size, family)
        ok, w = preserves(R, f)
        if not ok:
            return False, {"relation": R.name, **w.as_json()}
    return True, None


def check_min(gamma) -> bool:
    return m_preserves(gamma, MIN, MapFamilyKind.MONOTONE)[0]


def check_max(gamma) -> bool:
    return m_preserves(gamma, MAX, MapFamilyKind.MONOTONE)[0]


def check_median(gamma) -> bool:
    return m_preserves(gamma, MEDIAN, MapFamilyKind.MONOTONE)[0]


def check_connector(gamma) -> bool:
    return m_preserves(gamma, CONNECTOR, MapFamilyKind.MONOTONE_AND_ANTI)[0]


def _as_relations(gamma) -> List[Relation]:
    if isinstance(gamma, Relation):
        return [gamma]
    return list(gamma)


# ---------------------------------------------------------------- one-hot side

def _disjoint(s: Tup, t: Tup) -> bool:
    return all(a == 0 or b == 0 for a, b in zip(s, t))


def _union0(s: Tup, t: Tup) -> Tup:
    return tuple(a if b == 0 else b for a, b in zip(s, t))


def _direct_conditions(S: set, r: int) -> Optional[Tuple[str, Tup, Tup]]:
    """Both closure conditions; returns the first violation."""
    cube = list(itertools.product((0, 1), repeat=r))
    for s in cube:
        if s not in S:
            continue
        for t in cube:
            if not _disjoint(s, t):
                continue
            u = _union0(s, t)
            if t in S and u not in S:
                return ("union", s, t)
            if u in S and t not in S:
                return ("difference", s, t)
    return None


def _restrictions(R: Relation):
    """Every partial fixing of R's coordinates, as (fixing, tuple set, arity)."""
    r = R.arity
    for fix in itertools.product((None, 0, 1), repeat=r):
        keep = [i for i in range(r) if fix[i] is None]
        S = {tuple(t[i] for i in keep) for t in R if all(fix[i] is None or t[i] == fix[i] for i in range(r))}
        yield fix, S, len(keep)


def weak_separability_direct(R: Relation) -> Tuple[bool, Optional[dict]]:
    """Closure under 0-disjoint union and difference, on R and each 0-valid restriction of R.

    For a relation that is not 0-valid the two conditions alone are
    degenerate (taking t = 0 forces 0-validity), so the conditions are
    read on the 0-valid relations that restriction produces.
    """
    for fix, S, m in _restrictions(R):
        if m == 0 or (0,) * m not in S:
            continue
        bad = _direct_conditions(S, m)
        if bad is not None:
            kind, s, t = bad
            return False, {"restriction": [None if v is None else v for v in fix], "condition": kind,
                           "s": list(s), "t": list(t), "union": list(_union0(s, t))}
    return True, None


def weak_separability_algebraic(R: Relation) -> Tuple[bool, Optional[dict]]:
    for op in (F_NAND, G_IMPL):
        ok, w = preserves(R, op.as_multifunction())
        if not ok:
            return False, {"operation": op.name, **w.as_json()}
    return True, None


def check_weak_separability_report(R: Relation) -> Tuple[bool, Optional[dict]]:
    if R.domain_size != 2:
        raise InputError("weak separability is a Boolean notion")
    a, wa = weak_separability_direct(R)
    b, wb = weak_separability_algebraic(R)
    if a != b:
        raise InternalError(f"weak separability routes disagree on {R.name}: direct={a}, algebraic={b}")
    return a, (wa or wb)


def check_weak_separability(R) -> bool:
    return all(check_weak_separability_report(S)[0] for S in _as_relations(R))


def binary_choice(d: int) -> ConcreteMultifunction:
    """All-interpretation over [d] of the binary pattern 0,1 -> {0,1}."""
    f = ConcreteMultifunction(2, d)
    for a in range(d):
        for b in range(d):
            f.add((a, b), a)
            f.add((a, b), b)
    return f


def is_product_of_projections(R: Relation) -> bool:
    prod = 1
    for i in range(R.arity):
        prod *= len(relation_projection(R, [i]))
    return prod == len(R)


def check_essentially_unary(gamma) -> bool:
    for R in _as_relations(gamma):
        via_pattern = preserves(R, binary_choice(R.domain_size))[0]
        via_structure = is_product_of_projections(R)
        if via_pattern != via_structure:
            raise InternalError(f"essential unarity routes disagree on {R.name}")
        if not via_pattern:
            return False
    return True


# ---------------------------------------------------------------- classification

@dataclass
class Verdict:
    value: object
    witness: Optional[dict] = None
    seconds: float = 0.0

    def as_json(self) -> dict:
        return {"verdict": self.value, "witness": self.witness, "seconds": round(self.seconds, 6)}


@dataclass
class ClassificationReport:
    checks: Dict[str, Verdict] = field(default_factory=dict)
    families: Dict[str, dict] = field(default_factory=dict)

    def as_json(self) -> dict:
        return {"checks": {k: v.as_json() for k, v in self.checks.items()}, "families": self.families}


def _timed(fn):
    t0 = time.perf_counter()
    value, witness = fn()
    return Verdict(value, witness, time.perf_counter() - t0)


def _first_violation(gamma: List[Relation], P: Pattern, family: MapFamilyKind):
    return lambda: m_preserves(gamma, P, family)


def classify_language(gamma, onehot: Optional[bool] = None) -> ClassificationReport:
    """Per-family verdicts with witnesses.

    ``onehot`` forces (True) or skips (False) the one-hot section; by
    default it is included exactly when the language is Boolean.
    """
    from .definability import or2_definable

    rels = _as_relations(gamma)
    boolean = all(R.domain_size == 2 for R in rels)
    if onehot and not boolean:
        raise InputError("one-hot classification needs a Boolean language")
    rep = ClassificationReport()

    def eu():
        for R in rels:
            if not check_essentially_unary([R]):
                return False, {"relation": R.name}
        return True, None

    rep.checks["essentially_unary"] = _timed(eu)
    rep.families["all"] = {"class": "P" if rep.checks["essentially_unary"].value else "NP-hard",
                           "reason": "essentially_unary"}

    if (onehot is None and boolean) or onehot:
        def ws():
            for R in rels:
                ok, w = check_weak_separability_report(R)
                if not ok:
                    return False, {"relation": R.name, **(w or {})}
            return True, None

        def o2():
            for R in rels:
                if or2_definable(R) is None:
                    return False, {"relation": R.name}
            return True, None

        rep.checks["weakly_0_separable"] = _timed(ws)
        rep.checks["or2_definable"] = _timed(o2)
        if rep.checks["or2_definable"].value:
            cls = "P"
        elif rep.checks["weakly_0_separable"].value:
            cls = "FPT"
        else:
            cls = "W[1]-hard"
        rep.families["onehot"] = {"class": cls, "poly": rep.checks["or2_definable"].value,
                                  "fpt": rep.checks["weakly_0_separable"].value}

    rep.checks["min"] = _timed(_first_violation(rels, MIN, MapFamilyKind.MONOTONE))
    rep.checks["max"] = _timed(_first_violation(rels, MAX, MapFamilyKind.MONOTONE))
    rep.checks["median"] = _timed(_first_violation(rels, MEDIAN, MapFamilyKind.MONOTONE))
    rep.checks["connector"] = _timed(_first_violation(rels, CONNECTOR, MapFamilyKind.MONOTONE_AND_ANTI))
    mn, mx, med, con = (rep.checks[k].value for k in ("min", "max", "median", "connector"))
    poly = [k for k, v in (("min", mn), ("max", mx), ("median", med)) if v]
    rep.families["monotone"] = {
        "class": "P" if poly else ("FPT-candidate" if con else "W[1]-hard"),
        "poly_via": poly,
        "fpt_candidate": con,
        "w1_hard": (not con) and not mn and not mx,
    }
    return rep


__all__ = [
    "Pattern", "ConcreteMultifunction", "BooleanPartialOp", "Witness", "ClassificationReport", "Verdict",
    "MIN", "MAX", "MEDIAN", "CONNECTOR", "F_NAND", "G_IMPL",
    "interpret_pattern", "preserves", "preserves_naive", "apply_to_tuples", "m_preserves",
    "check_min", "check_max", "check_median", "check_connector",
    "check_weak_separability", "check_weak_separability_report", "weak_separability_direct",
    "weak_separability_algebraic", "check_essentially_unary", "binary_choice", "is_product_of_projections",
    "classify_language",
]
