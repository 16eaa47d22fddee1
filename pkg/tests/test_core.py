from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from udcsp.core import (Constraint, Instance, MapFamilyKind, Relation, UnaryMap, builtin, builtin_relations,
                        constraint_satisfied, count_family_tables, enumerate_tables, family_contains, instance_eval,
                        language_star, map_apply, map_compose, relation_is_0valid, relation_projection,
                        restrict_relation, reversal_map)
from udcsp.errors import InputError
from udcsp.io import instance_from_json, instance_to_json, map_from_json, map_to_json, read_matrix, write_matrix


def test_threshold_maps():
    m = UnaryMap.monotone(7, [3])
    assert map_apply(m, 2) == 0 and map_apply(m, 3) == 1
    h = UnaryMap.onehot(6, 4)
    assert map_apply(h, 4) == 1 and map_apply(h, 0) == 0
    a = UnaryMap.antimonotone(5, [1, 3])
    assert a.table == (2, 1, 1, 0, 0)
    with pytest.raises(InputError):
        map_apply(m, 7)


def test_compose_rederives_thresholds():
    inner = UnaryMap.monotone(9, [2, 5])  # 9 -> 3
    outer = UnaryMap.monotone(3, [2])  # 3 -> 2
    c = map_compose(outer, inner)
    assert c.table == tuple(outer.table[v] for v in inner.table)
    assert c.encoding == "monotone" and c.payload == (5,)
    assert map_compose(UnaryMap.identity(3), inner) == inner
    rev = map_compose(inner, reversal_map(9))
    assert rev.is_antimonotone() and not rev.is_monotone()


def test_constraint_eval():
    Impl = builtin("Impl")
    c = Constraint(Impl, (0, 1), (UnaryMap.geq(7, 3), UnaryMap.geq(7, 5)))
    assert constraint_satisfied(c, (4, 6))
    assert not constraint_satisfied(c, (4, 2))
    with pytest.raises(InputError):
        Relation("empty", 2, 0, [])


def test_restrict_and_projection():
    Nand2, Eq = builtin("Nand2"), builtin("Eq")
    assert restrict_relation(Nand2, 1, 1).tuples == ((0,),)
    assert restrict_relation(Nand2, 1, 0).tuples == ((0,), (1,))
    assert restrict_relation(Eq, 2, 1).tuples == ((1,),)
    assert restrict_relation(builtin("One"), 1, 1) is True
    assert relation_projection(Eq, [0]).tuples == ((0,), (1,))
    assert relation_is_0valid(builtin("Impl")) and not relation_is_0valid(builtin("Or2"))


def test_builtin_r3():
    assert builtin("R3").tuples == ((0, 0), (0, 2), (1, 1), (2, 0), (2, 2))
    assert len(builtin_relations()) > 20


def test_language_star():
    star = language_star([builtin("Eq")])
    got = {R.tuples for R in star.language if R.domain_size == 2}
    assert {((0, 0), (1, 1)), ((0,),), ((1,),)} <= got
    nand = language_star([builtin("Nand2")])
    got = {R.tuples for R in nand.language}
    assert ((0,),) in got and ((0,), (1,)) in got
    again = language_star(list(star.language))
    assert {R.tuples for R in again.language} == {R.tuples for R in star.language}


def test_family_counts_match_enumeration():
    for n, d in [(2, 2), (4, 3), (5, 2)]:
        for fam in MapFamilyKind:
            if fam is MapFamilyKind.ID and n != d:
                continue
            tabs = list(enumerate_tables(n, d, fam))
            assert len(tabs) == len(set(tabs)) == count_family_tables(n, d, fam)
            for t in tabs:
                assert family_contains(fam, UnaryMap.from_table(t, d))
    assert len(list(enumerate_tables(2, 2, MapFamilyKind.MONOTONE))) == 3


def test_instance_validation():
    with pytest.raises(InputError):
        Instance(3, ("x", "x"), ())
    with pytest.raises(InputError):
        Instance(3, ("x",), (Constraint(builtin("Zero"), (1,), (UnaryMap.geq(3, 1),)),))
    with pytest.raises(InputError):
        Instance(3, ("x",), (Constraint(builtin("Zero"), (0,), (UnaryMap.geq(4, 1),)),))
    inst = Instance(3, ("x", "y"), ())
    assert instance_eval(inst, (2, 2))


maps = st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, 3)))


@st.composite
def instances(draw):
    n = draw(st.integers(1, 5))
    k = draw(st.integers(1, 3))
    rels = [R for R in builtin_relations() if R.arity <= 3]
    cons = []
    for _ in range(draw(st.integers(0, 4))):
        R = draw(st.sampled_from(rels))
        vs = tuple(draw(st.integers(0, k - 1)) for _ in range(R.arity))
        kind = draw(st.sampled_from(["table", "mono", "anti", "hot"]))
        ms = []
        for _ in vs:
            if kind == "hot" and R.domain_size == 2:
                ms.append(UnaryMap.onehot(n, draw(st.integers(0, n - 1))))
            elif kind in ("mono", "anti"):
                ts = sorted(draw(st.lists(st.integers(0, n), min_size=R.domain_size - 1,
                                          max_size=R.domain_size - 1)))
                ms.append(UnaryMap.monotone(n, ts) if kind == "mono" else UnaryMap.antimonotone(n, ts))
            else:
                ms.append(UnaryMap.from_table(draw(st.lists(st.integers(0, R.domain_size - 1), min_size=n,
                                                            max_size=n)), R.domain_size))
        cons.append(Constraint(R, vs, tuple(ms)))
    weights = None
    if draw(st.booleans()):
        weights = tuple(tuple(draw(st.integers(0, 9)) for _ in range(n)) for _ in range(k))
    return Instance(n, tuple(f"v{i}" for i in range(k)), tuple(cons), weights)


@settings(max_examples=150, deadline=None)
@given(instances())
def test_json_round_trip(inst):
    back = instance_from_json(instance_to_json(inst, {"generator": "test"}))
    assert back == inst
    for a in itertools.product(range(inst.domain_size), repeat=inst.k):
        assert instance_eval(back, a) == instance_eval(inst, a)


def test_map_json_encodings():
    for m in (UnaryMap.onehot(5, 2), UnaryMap.monotone(5, [1, 4]), UnaryMap.antimonotone(5, [2]),
              UnaryMap.from_table([1, 0, 1], 2)):
        assert map_from_json(map_to_json(m), m.source_size, m.target_size) == m
    with pytest.raises(InputError):
        map_from_json({"table": [0, 1], "onehot": 1}, 2, 2)


def test_matrix_text():
    rows = [[1, 0, 1], [0, 0, 1]]
    assert read_matrix(write_matrix(rows)) == rows
    with pytest.raises(InputError):
        read_matrix("10\n1")
