"""Quantifier-free, equality-free definitions guarded by unary maps.

The canonical formula of R over a language and a map family is the
conjunction of every atom S(m_1(x_{i_1}), ...) that all tuples of R
satisfy.  R is definable exactly when that conjunction evaluates to R,
so the canonical construction doubles as the decision procedure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import budget
from .core import (
    Constraint,
    Instance,
    MapFamilyKind,
    Relation,
    UnaryMap,
    builtin,
    count_family_tables,
    enumerate_tables,
    family_contains,
    map_compose,
    reversal_map,
)
from .errors import InputError, PreconditionError


@dataclass(frozen=True)
class Atom:
    relation: Relation
    index: Tuple[int, ...]
    maps: Tuple[UnaryMap, ...]

    def holds(self, t: Sequence[int]) -> bool:
        return tuple(m.table[t[i]] for i, m in zip(self.index, self.maps)) in self.relation


@dataclass(frozen=True)
class FgppFormula:
    target_arity: int
    target_domain: int
    atoms: Tuple[Atom, ...] = ()

    def holds(self, t: Sequence[int]) -> bool:
        return all(a.holds(t) for a in self.atoms)

    def relations(self) -> List[Relation]:
        seen: Dict[str, Relation] = {}
        for a in self.atoms:
            seen.setdefault(a.relation.name, a.relation)
        return list(seen.values())

    def to_json(self) -> dict:
        from .io import map_to_json, relation_to_json

        return {
            "target_arity": self.target_arity,
            "target_domain": self.target_domain,
            "relations": {R.name: relation_to_json(R) for R in self.relations()},
            "atoms": [{"rel": a.relation.name, "index": list(a.index), "maps": [map_to_json(m) for m in a.maps]}
                      for a in self.atoms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FgppFormula":
        from .io import map_from_json, relations_from_json

        rels = relations_from_json(obj["relations"])
        n = int(obj["target_domain"])
        atoms = []
        for a in obj["atoms"]:
            R = rels[a["rel"]]
            atoms.append(Atom(R, tuple(a["index"]), tuple(map_from_json(m, n, R.domain_size) for m in a["maps"])))
        return cls(int(obj["target_arity"]), n, tuple(atoms))


def enumerate_maps(n: int, d: int, family: MapFamilyKind) -> Iterator[UnaryMap]:
    for t in enumerate_tables(n, d, family):
        if family is MapFamilyKind.ONEHOT:
            yield UnaryMap.onehot(n, t.index(1))
        else:
            yield UnaryMap.canonical(t, d)


def _grid(n: int, r: int) -> np.ndarray:
    """All tuples of [n]^r in lexicographic order, shape (n^r, r)."""
    return np.array(list(itertools.product(range(n), repeat=r)), dtype=np.int64).reshape(-1, r)


def formula_to_relation(F: FgppFormula, n: Optional[int] = None, name: str = "defined") -> Relation:
    n = F.target_domain if n is None else n
    if n != F.target_domain:
        raise InputError(f"formula is over [{F.target_domain}], asked to evaluate over [{n}]")
    return Relation(name, n, F.target_arity, (t for t in itertools.product(range(n), repeat=F.target_arity) if F.holds(t)))


def _atom_mask(S: Relation, index: Sequence[int], tables: Sequence[np.ndarray], X: np.ndarray, lut: np.ndarray) -> np.ndarray:
    code = np.zeros(X.shape[0], dtype=np.int64)
    for i, tab in zip(index, tables):
        code = code * S.domain_size + tab[X[:, i]]
    return lut[code]


def _lut(S: Relation) -> np.ndarray:
    lut = np.zeros(S.domain_size ** S.arity, dtype=bool)
    for t in S:
        lut[S.code(t)] = True
    return lut


def _candidate_atoms(gamma: Sequence[Relation], family: MapFamilyKind, R: Relation):
    """Yield (S, index, map tables) for every atom satisfied by all tuples of R."""
    n, r = R.domain_size, R.arity
    T = np.array(R.tuples, dtype=np.int64).reshape(-1, r)
    for S in gamma:
        tabs = list(enumerate_tables(n, S.domain_size, family))
        if not tabs:
            continue
        total = float(r) ** S.arity * float(len(tabs)) ** S.arity
        budget.check("atoms", total, f"atoms over {S.name}")
        M = np.array(tabs, dtype=np.int64)  # (|M|, n)
        lut = _lut(S)
        for index in itertools.product(range(r), repeat=S.arity):
            if len(T) == 0:
                combos = itertools.product(range(len(tabs)), repeat=S.arity)
                for ch in combos:
                    yield S, index, [M[c] for c in ch]
                continue
            # code[c_1,..,c_s, t] by broadcasting over map choices
            code = np.zeros((1,) * S.arity + (len(T),), dtype=np.int64)
            for pos, i in enumerate(index):
                vals = M[:, T[:, i]]  # (|M|, |R|)
                shape = [1] * S.arity + [len(T)]
                shape[pos] = len(tabs)
                code = code * S.domain_size + vals.reshape(shape)
            ok = lut[code].all(axis=-1)
            for ch in zip(*np.nonzero(ok)):
                yield S, index, [M[c] for c in ch]


def canonical_fgpp_formula(gamma: Iterable[Relation], family: MapFamilyKind, R: Relation,
                           prune: bool = True) -> FgppFormula:
    """All atoms that R satisfies, deduplicated by their evaluation; optionally pruned."""
    gamma = list(gamma)
    n, r = R.domain_size, R.arity
    budget.check("bruteforce", float(n) ** r, "formula evaluation grid")
    X = _grid(n, r)
    luts = {id(S): _lut(S) for S in gamma}
    masks: Dict[bytes, Tuple[np.ndarray, Atom]] = {}
    for S, index, tabs in _candidate_atoms(gamma, family, R):
        mask = _atom_mask(S, index, tabs, X, luts[id(S)])
        key = np.packbits(mask).tobytes()
        if key in masks:
            continue
        atom = Atom(S, tuple(int(i) for i in index), tuple(UnaryMap.canonical([int(v) for v in tab], S.domain_size)
                                                          if family is not MapFamilyKind.ONEHOT
                                                          else UnaryMap.onehot(n, int(np.argmax(tab)))
                                                          for tab in tabs))
        masks[key] = (mask, atom)
    items = list(masks.values())
    if not prune or not items:
        return FgppFormula(r, n, tuple(a for _, a in items))
    full = np.ones(X.shape[0], dtype=bool)
    for mask, _ in items:
        full &= mask
    # greedy cover of the tuples the full conjunction excludes
    uncovered = ~full
    chosen: List[int] = []
    while uncovered.any():
        best = max(range(len(items)), key=lambda j: int((uncovered & ~items[j][0]).sum()))
        chosen.append(best)
        uncovered &= items[best][0]
    # drop atoms made redundant by later picks
    for j in list(chosen):
        rest = [c for c in chosen if c != j]
        acc = np.ones(X.shape[0], dtype=bool)
        for c in rest:
            acc &= items[c][0]
        if np.array_equal(acc, full):
            chosen = rest
    return FgppFormula(r, n, tuple(items[c][1] for c in chosen))


def fgpp_definable(gamma: Iterable[Relation], family: MapFamilyKind, R: Relation) -> Optional[FgppFormula]:
    F = canonical_fgpp_formula(gamma, family, R)
    got = formula_to_relation(F)
    return F if got == R else None


# ---------------------------------------------------------------- Or2 definitions

def _or2_language() -> List[Relation]:
    return [builtin("Or2"), builtin("Zero"), builtin("One")]


def or2_definable(R: Relation) -> Optional[FgppFormula]:
    """Definition of a Boolean R in positive 2-clauses and constants, if one exists.

    Quantifiers are not used: for this language every definable relation
    has a quantifier-free definition (checked exhaustively at small
    arity in the test suite).
    """
    if R.domain_size != 2:
        return None
    return fgpp_definable(_or2_language(), MapFamilyKind.ID, R)


# ---------------------------------------------------------------- instance transforms

def inline_defined_relation(inst: Instance, R: Relation, F: FgppFormula,
                            family: Optional[MapFamilyKind] = None) -> Instance:
    """Replace every R-constraint by the atoms of F with composed maps."""
    if F.target_arity != R.arity or F.target_domain != R.domain_size:
        raise InputError("formula shape does not match the relation")
    out: List[Constraint] = []
    for c in inst.constraints:
        if c.relation != R:
            out.append(c)
            continue
        for a in F.atoms:
            vs = tuple(c.vars[i] for i in a.index)
            ms = tuple(map_compose(m, c.maps[i]) for i, m in zip(a.index, a.maps))
            if family is not None:
                for m in ms:
                    if not family_contains(family, m):
                        raise InputError(f"composed map {m.table} leaves the family {family.value}")
            out.append(Constraint(a.relation, vs, ms))
    return inst.with_constraints(out)


def reversal_relation(n: int) -> Relation:
    return Relation(f"Rev{n}", n, 2, [(x, n - 1 - x) for x in range(n)])


def reverse_variable_transform(inst: Instance) -> Instance:
    """Rewrite an instance over Mo u Mo' into one over Mo.

    Every variable x with an anti-monotone occurrence gets a twin x_rev
    tied to n-1-x by a monotone definition of the reversal graph, and
    anti-monotone maps on x become monotone maps on the twin.  When any
    twin is needed, every variable gets one, so the count doubles.
    """
    from .patterns import check_max, check_min

    anti = any(not m.is_monotone() for c in inst.constraints for m in c.maps)
    for c in inst.constraints:
        for m in c.maps:
            if not (m.is_monotone() or m.is_antimonotone()):
                raise InputError("instance uses a map outside Mo u Mo'")
    if not anti:
        return inst
    gamma = list(inst.relations())
    if check_min(gamma) or check_max(gamma):
        raise PreconditionError("language is min- or max-closed; the reversal graph need not be definable")
    n = inst.domain_size
    F = fgpp_definable(gamma, MapFamilyKind.MONOTONE, reversal_relation(n))
    if F is None:
        raise PreconditionError(f"no monotone definition of the reversal graph over [{n}] from {[R.name for R in gamma]}")
    k = inst.k
    rev = reversal_map(n)
    cons: List[Constraint] = []
    for c in inst.constraints:
        vs, ms = [], []
        for v, m in zip(c.vars, c.maps):
            if m.is_monotone():
                vs.append(v)
                ms.append(m)
            else:
                vs.append(v + k)
                ms.append(map_compose(m, rev))
        cons.append(Constraint(c.relation, tuple(vs), tuple(ms)))
    for v in range(k):
        for a in F.atoms:
            cons.append(Constraint(a.relation, tuple((v, v + k)[i] for i in a.index), a.maps))
    names = tuple(inst.variables) + tuple(f"{x}_rev" for x in inst.variables)
    weights = None
    if inst.weights is not None:
        weights = tuple(inst.weights) + tuple((0,) * n for _ in range(k))
    return Instance(n, names, tuple(cons), weights)


__all__ = [
    "Atom", "FgppFormula", "enumerate_maps", "formula_to_relation", "canonical_fgpp_formula", "fgpp_definable",
    "or2_definable", "inline_defined_relation", "reversal_relation", "reverse_variable_transform",
    "count_family_tables",
]
