from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from udcsp.core import MapFamilyKind, Relation, builtin
from udcsp.errors import InputError
from udcsp.patterns import (CONNECTOR, MAX, MEDIAN, MIN, F_NAND, G_IMPL, ConcreteMultifunction, check_connector,
                            check_essentially_unary, check_max, check_median, check_min, check_weak_separability,
                            classify_language, interpret_pattern, preserves, preserves_naive,
                            weak_separability_algebraic, weak_separability_direct)


def test_min_interpretation():
    f = interpret_pattern(MIN, 5, MapFamilyKind.MONOTONE)
    assert f(3, 4) == {3}
    assert f(2, 0) == {0} and f(1, 1) == {1}


def test_connector_interpretation():
    f = interpret_pattern(CONNECTOR, 3, MapFamilyKind.MONOTONE_AND_ANTI)
    assert f(0, 0, 0, 0, 0) == {0}
    assert f(2, 2, 1, 0, 0) == {2}
    assert f(0, 0, 1, 2, 2) == {0}
    assert f(2, 2, 0, 0, 0) == {2}
    assert f(1, 0, 2, 1, 0) == frozenset()


def test_id_family():
    assert interpret_pattern(MIN, 2, MapFamilyKind.ID)(0, 1) == {0}
    assert not interpret_pattern(MIN, 3, MapFamilyKind.ID).table
    with pytest.raises(InputError):
        interpret_pattern(MIN, 3, MapFamilyKind.ONEHOT)


def test_preserves_examples():
    ok, w = preserves(builtin("R3"), interpret_pattern(CONNECTOR, 3, MapFamilyKind.MONOTONE_AND_ANTI))
    assert not ok and w.inputs == ((0, 0), (0, 2), (1, 1), (2, 0), (2, 2)) and w.output == (0, 1)
    assert preserves(builtin("Impl"), interpret_pattern(MIN, 2, MapFamilyKind.MONOTONE))[0]
    assert check_connector([builtin("Ra")])
    with pytest.raises(InputError):
        preserves(builtin("Impl"), interpret_pattern(MIN, 3, MapFamilyKind.MONOTONE))


def test_named_checks():
    assert check_min([builtin("Impl"), builtin("Zero")])
    assert not check_median([builtin("NAE")])
    assert not check_connector([builtin("Even4")])
    assert check_max([builtin("Or2")]) and not check_min([builtin("Or2")])


def test_weak_separability_examples():
    ok, w = weak_separability_direct(builtin("Nand2"))
    assert not ok and w["union"] == [1, 1]
    assert check_weak_separability(builtin("Even4"))
    assert not check_weak_separability(builtin("Impl"))
    assert check_weak_separability(builtin("Eq"))
    with pytest.raises(InputError):
        check_weak_separability(builtin("R3"))


def test_weak_separability_routes_agree_on_all_small_relations():
    for r in (1, 2, 3):
        cube = list(itertools.product((0, 1), repeat=r))
        for bits in range(1, 1 << len(cube)):
            R = Relation("r", 2, r, [t for i, t in enumerate(cube) if bits >> i & 1])
            assert weak_separability_direct(R)[0] == weak_separability_algebraic(R)[0]


def test_essentially_unary():
    assert check_essentially_unary([Relation("u", 3, 1, [(0,), (2,)])])
    assert not check_essentially_unary([builtin("Eq")])
    assert check_essentially_unary([Relation("full", 2, 2, itertools.product(range(2), repeat=2))])


@st.composite
def relation_and_op(draw):
    d = draw(st.integers(2, 3))
    r = draw(st.integers(1, 3))
    cube = list(itertools.product(range(d), repeat=r))
    tuples = draw(st.lists(st.sampled_from(cube), min_size=1, max_size=8, unique=True))
    k = draw(st.integers(1, 3))
    f = ConcreteMultifunction(k, d)
    for u in draw(st.lists(st.tuples(*[st.integers(0, d - 1)] * k), max_size=6)):
        for o in draw(st.lists(st.integers(0, d - 1), min_size=1, max_size=2)):
            f.add(u, o)
    return Relation("h", d, r, tuples), f


@settings(max_examples=300, deadline=None)
@given(relation_and_op())
def test_preserves_matches_naive(pair):
    R, f = pair
    assert preserves(R, f)[0] == preserves_naive(R, f)


@pytest.mark.parametrize("P", [MIN, MAX, MEDIAN])
def test_named_patterns_against_naive(P):
    for R in (builtin("Impl"), builtin("Ra"), builtin("R3"), builtin("NAE"), builtin("Or2")):
        f = interpret_pattern(P, R.domain_size, MapFamilyKind.MONOTONE)
        assert preserves(R, f)[0] == preserves_naive(R, f)


def test_boolean_partial_ops():
    assert F_NAND.as_multifunction()(0, 0, 1) == {1}
    assert G_IMPL.as_multifunction()(1, 1, 0) == frozenset()


def test_classify_examples():
    rep = classify_language([builtin("Impl"), builtin("Zero")])
    assert rep.families["monotone"]["class"] == "P" and "min" in rep.families["monotone"]["poly_via"]
    rep = classify_language([builtin("R3")])
    assert rep.families["monotone"]["w1_hard"] and rep.families["monotone"]["class"] == "W[1]-hard"
    assert "onehot" not in rep.families
    rep = classify_language([builtin("Even4")])
    assert rep.families["onehot"]["class"] == "FPT"
    assert rep.families["monotone"]["class"] == "W[1]-hard"
    assert classify_language([builtin("Or2")]).families["onehot"]["class"] == "P"
    with pytest.raises(InputError):
        classify_language([builtin("R3")], onehot=True)
    assert rep.as_json()["checks"]["connector"]["witness"]["relation"] == "Even4"
