from __future__ import annotations

import itertools
import random

import pytest

from udcsp.core import Constraint, Instance, MapFamilyKind, Relation, UnaryMap, builtin, family_contains
from udcsp.definability import (Atom, FgppFormula, canonical_fgpp_formula, enumerate_maps, fgpp_definable,
                                formula_to_relation, inline_defined_relation, or2_definable,
                                reverse_variable_transform)
from udcsp.errors import InputError, PreconditionError
from udcsp.generators import gen_halfgraph, gen_nae, gen_permutation_via_r3, permutation_graph
from udcsp.patterns import check_connector, check_min
from udcsp.solvers import all_solutions, count_solutions


def test_enumerate_maps():
    assert [m.table for m in enumerate_maps(2, 2, MapFamilyKind.MONOTONE)] == [(0, 0), (0, 1), (1, 1)]
    assert len(list(enumerate_maps(4, 2, MapFamilyKind.ONEHOT))) == 4
    assert [m.table for m in enumerate_maps(3, 3, MapFamilyKind.ID)] == [(0, 1, 2)]
    assert len(list(enumerate_maps(3, 2, MapFamilyKind.ALL))) == 8


def test_formula_evaluation():
    assert len(formula_to_relation(FgppFormula(2, 3))) == 9
    Eq = builtin("Eq")
    one = FgppFormula(2, 2, (Atom(Eq, (0, 1), (UnaryMap.identity(2), UnaryMap.identity(2))),))
    assert formula_to_relation(one).same_tuples(Eq)
    with pytest.raises(InputError):
        formula_to_relation(one, 3)


def test_canonical_examples():
    target = permutation_graph([1, 2, 0])
    F = canonical_fgpp_formula([builtin("R3")], MapFamilyKind.MONOTONE, target)
    assert formula_to_relation(F).tuples == ((0, 1), (1, 2), (2, 0))
    Eq = builtin("Eq")
    F = canonical_fgpp_formula([Eq], MapFamilyKind.ID, Eq)
    assert any(a.relation == Eq and a.index == (0, 1) for a in F.atoms)
    Nand2 = builtin("Nand2")
    got = formula_to_relation(canonical_fgpp_formula([builtin("Impl")], MapFamilyKind.MONOTONE, Nand2))
    assert set(Nand2.tuples) < set(got.tuples)


def test_definable_examples():
    H4 = gen_halfgraph(4)[0]
    assert fgpp_definable([builtin("RD"), builtin("Impl")], MapFamilyKind.MONOTONE, H4) is not None
    assert fgpp_definable([builtin("Impl")], MapFamilyKind.MONOTONE, builtin("R3")) is None
    assert check_connector([builtin("Impl")]) and not check_connector([builtin("R3")])


def test_formula_json_round_trip():
    F, _ = gen_permutation_via_r3([2, 0, 1])
    back = FgppFormula.from_json(F.to_json())
    assert formula_to_relation(back).same_tuples(formula_to_relation(F))


def test_or2_examples():
    assert or2_definable(builtin("Or2")) is not None
    assert or2_definable(builtin("Impl")) is None
    assert or2_definable(builtin("Eq")) is None
    assert or2_definable(builtin("R3")) is None
    assert or2_definable(Relation("oo", 2, 2, [(1, 1)])) is not None


def test_or2_existential_variables_are_removable():
    """Projecting one quantified variable out of a positive 2-CNF stays quantifier-free definable."""
    rng = random.Random(3)
    Or2, Zero, One = builtin("Or2"), builtin("Zero"), builtin("One")
    for _ in range(300):
        r = rng.randint(1, 3)
        atoms = []
        for _ in range(rng.randint(1, 5)):
            kind = rng.random()
            if kind < 0.7:
                atoms.append((Or2, (rng.randrange(r + 1), rng.randrange(r + 1))))
            else:
                atoms.append((rng.choice([Zero, One]), (rng.randrange(r + 1),)))
        full = [t for t in itertools.product((0, 1), repeat=r + 1)
                if all(tuple(t[i] for i in idx) in R for R, idx in atoms)]
        proj = sorted({t[:r] for t in full})
        if not proj:
            continue
        assert or2_definable(Relation("p", 2, r, proj)) is not None


def test_inline_permutation_formula():
    sigma = [2, 0, 3, 1]
    target = permutation_graph(sigma)
    F, _ = gen_permutation_via_r3(sigma)
    ident = UnaryMap.identity(4)
    inst = Instance(4, ("x", "y", "z"), (Constraint(target, (0, 1), (ident, ident)),
                                        Constraint(target, (1, 2), (ident, ident))))
    out = inline_defined_relation(inst, target, F, MapFamilyKind.MONOTONE)
    assert out.k == inst.k
    assert all(c.relation.name == "R3" for c in out.constraints)
    assert set(all_solutions(out)) == set(all_solutions(inst))
    empty = Instance(4, ("x",), ())
    assert inline_defined_relation(empty, target, F) == empty


def test_inline_rejects_family_escape():
    R = Relation("r", 2, 1, [(1,)])
    F = FgppFormula(1, 2, (Atom(builtin("One"), (0,), (UnaryMap.from_table([1, 0], 2),)),))
    inst = Instance(3, ("x",), (Constraint(R, (0,), (UnaryMap.geq(3, 1),)),))
    with pytest.raises(InputError):
        inline_defined_relation(inst, R, F, MapFamilyKind.MONOTONE)


def test_reverse_transform_nae():
    clauses = [[(0, 1), (1, 2), (2, 0)], [(0, 2), (1, 0), (2, 1)]]
    inst = gen_nae(clauses, 4, 3)
    out = reverse_variable_transform(inst)
    assert out.k == 2 * inst.k
    assert all(m.is_monotone() for c in out.constraints for m in c.maps)
    sols = all_solutions(out)
    assert len(sols) == count_solutions(inst)
    for s in sols:
        assert all(s[v + inst.k] == 3 - s[v] for v in range(inst.k))


def test_reverse_transform_edge_cases():
    Impl = builtin("Impl")
    mono = Instance(4, ("x", "y"), (Constraint(Impl, (0, 1), (UnaryMap.geq(4, 1), UnaryMap.geq(4, 2))),))
    assert reverse_variable_transform(mono) == mono
    anti = Instance(4, ("x", "y"), (Constraint(Impl, (0, 1), (UnaryMap.leq(4, 1), UnaryMap.geq(4, 2))),))
    with pytest.raises(PreconditionError):
        reverse_variable_transform(anti)


def test_galois_cross_check():
    """A definable relation keeps the connector pattern whenever the language does."""
    rng = random.Random(11)
    cube = list(itertools.product(range(3), repeat=2))
    tried = 0
    while tried < 25:
        S = Relation("s", 3, 2, [t for t in cube if rng.random() < 0.5] or [(0, 0)])
        R = Relation("r", 3, 2, [t for t in cube if rng.random() < 0.6] or [(1, 1)])
        F = fgpp_definable([S], MapFamilyKind.MONOTONE_AND_ANTI, R)
        if F is None:
            continue
        tried += 1
        for a in F.atoms:
            assert all(family_contains(MapFamilyKind.MONOTONE_AND_ANTI, m) for m in a.maps)
        if check_connector([S]):
            assert check_connector([R])
        if check_min([S]) and all(m.is_monotone() for a in F.atoms for m in a.maps):
            assert check_min([R])
