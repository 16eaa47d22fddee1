from __future__ import annotations

import itertools
import random

import pytest

from udcsp.core import builtin
from udcsp.definability import formula_to_relation, reverse_variable_transform
from udcsp.errors import InputError
from udcsp.generators import (Digraph, enumerate_min_cuts, gen_diamond, gen_exact_3hs, gen_halfgraph, gen_mincut,
                              gen_multicoloured_clique, gen_nae, gen_permutation_via_r3, has_exact_hitting_set,
                              is_sidon, nae_direct, random_dag, sidon_prime, sidon_set,
                              verify_exact_3hs, verify_formula, verify_mincut, verify_multicoloured_clique,
                              verify_nae, verify_permutation)
from udcsp.sampling import random_permutation
from udcsp.solvers import all_solutions, count_solutions, solve_bruteforce


def test_mincut_examples():
    G = Digraph(["s", "a", "t"], [("s", "a"), ("a", "t")], "s", "t")
    inst = gen_mincut(G)
    assert inst.k == 1 and not inst.constraints and count_solutions(inst) == 2
    G = Digraph(["s", "a", "b", "t"], [("s", "a"), ("a", "t"), ("s", "b"), ("b", "t")], "s", "t")
    assert count_solutions(gen_mincut(G)) == 4 == len(enumerate_min_cuts(G, "s", "t"))
    G = Digraph(["s", "a", "b", "t"], [("s", "a"), ("s", "b"), ("a", "b"), ("a", "t"), ("b", "t")], "s", "t")
    assert count_solutions(gen_mincut(G)) == len(enumerate_min_cuts(G, "s", "t"))
    branch = Digraph(["s", "a", "b", "t"], [("s", "a"), ("a", "t"), ("a", "b"), ("b", "t")], "s", "t")
    assert count_solutions(gen_mincut(branch)) == len(enumerate_min_cuts(branch, "s", "t")) == 1


def test_mincut_coordination_off_path():
    G = Digraph(["s", "a", "t"], [("s", "a"), ("a", "t")], "s", "t")
    with pytest.raises(InputError):
        gen_mincut(G, coordination=[(("s", "a"), ("s", "t"), "iff")])


def test_mincut_random():
    rng = random.Random(21)
    for _ in range(100):
        G = random_dag(rng, rng.randint(2, 7), 10)
        assert verify_mincut(G)
        assert Digraph.from_json(G.to_json()).arcs == G.arcs


def test_clique_examples():
    col = {"a": 0, "b": 1, "c": 2}
    tri = [("a", "b"), ("b", "c"), ("a", "c")]
    assert solve_bruteforce(gen_multicoloured_clique(tri, 3, col)).sat
    assert not solve_bruteforce(gen_multicoloured_clique(tri[:2], 3, col)).sat
    assert solve_bruteforce(gen_multicoloured_clique([], 1, {"a": 0})).sat
    with pytest.raises(InputError):
        gen_multicoloured_clique(tri, 3, {"a": 0, "b": 1, "c": 1})


def test_clique_random():
    rng = random.Random(22)
    for _ in range(100):
        k = rng.randint(2, 3)
        verts = [f"u{i}" for i in range(rng.randint(k, 6))]
        col = {v: i % k for i, v in enumerate(verts)}
        edges = [e for e in itertools.combinations(verts, 2) if col[e[0]] != col[e[1]] and rng.random() < 0.5]
        assert verify_multicoloured_clique(edges, k, col)


def test_hitting_set_examples():
    assert solve_bruteforce(gen_exact_3hs("abc", [("a", "b", "c")])).sat
    C = [("a", "b", "c"), ("a", "b", "d")]
    assert has_exact_hitting_set("abcd", C) and solve_bruteforce(gen_exact_3hs("abcd", C)).sat
    C = [("a", "b", "c"), ("a", "b", "d"), ("a", "c", "d"), ("b", "c", "d")]
    assert solve_bruteforce(gen_exact_3hs("abcd", C)).sat == has_exact_hitting_set("abcd", C)


def test_hitting_set_random():
    rng = random.Random(23)
    for _ in range(100):
        S = "abcdef"[:rng.randint(3, 6)]
        C = [tuple(rng.sample(S, 3)) for _ in range(rng.randint(1, 4))]
        assert verify_exact_3hs(S, C)


def test_nae_examples():
    inst = gen_nae([[(0, 0), (1, 0), (2, 1)]], 2, 3)
    assert solve_bruteforce(inst).sat
    # NAE(a, a, b) says a != b; three pairwise-distinct Booleans do not exist
    contra = [[(0, 0), (0, 0), (1, 0)], [(1, 0), (1, 0), (2, 0)], [(0, 0), (0, 0), (2, 0)]]
    assert all(not nae_direct(contra, a) for a in itertools.product(range(2), repeat=3))
    assert not solve_bruteforce(gen_nae(contra, 2, 3)).sat
    clauses = [[(0, 1), (1, 2), (2, 0)]]
    assert solve_bruteforce(reverse_variable_transform(gen_nae(clauses, 4, 3))).sat == \
        solve_bruteforce(gen_nae(clauses, 4, 3)).sat


def test_nae_random():
    rng = random.Random(24)
    for _ in range(100):
        n, k = rng.randint(2, 4), rng.randint(1, 3)
        clauses = [[(rng.randrange(k), rng.randrange(n)) for _ in range(3)] for _ in range(rng.randint(1, 5))]
        assert verify_nae(clauses, n, k)


def test_permutation_examples():
    F, _ = gen_permutation_via_r3([0, 1, 2])
    assert formula_to_relation(F).tuples == ((0, 0), (1, 1), (2, 2))
    F, inst = gen_permutation_via_r3([1, 2, 0])
    assert formula_to_relation(F).tuples == ((0, 1), (1, 2), (2, 0))
    assert set(all_solutions(inst)) == {(0, 1), (1, 2), (2, 0)}
    F, _ = gen_permutation_via_r3([3, 2, 1, 0])
    assert formula_to_relation(F).tuples == tuple((i, 3 - i) for i in range(4))
    with pytest.raises(InputError):
        gen_permutation_via_r3([0, 0, 1])


def test_permutation_random():
    rng = random.Random(25)
    for n in range(1, 5):
        for sigma in itertools.permutations(range(n)):
            assert verify_permutation(sigma)
    for _ in range(100):
        assert verify_permutation(random_permutation(rng, rng.randint(1, 9)))


def test_sidon_examples():
    assert sidon_set(3, variant="literal") == [0, 4, 7]
    assert sorted(a + b for a, b in itertools.combinations_with_replacement([0, 4, 7], 2)) == [0, 4, 7, 8, 11, 14]
    assert sidon_set(1) == [0]
    S = sidon_set(10)
    assert len(S) == 10 and is_sidon(S)
    assert not is_sidon(sidon_set(8, variant="literal"))
    assert sidon_prime(8) == 11
    with pytest.raises(InputError):
        sidon_set(0)


def test_sidon_range():
    for n in range(1, 120):
        S, p = sidon_set(n), sidon_prime(n)
        assert is_sidon(S) and max(S) < 2 * p * p


def test_diamond_and_halfgraph():
    R, F = gen_diamond(8)
    assert verify_formula(R, F) and len(F.atoms) == 3
    assert all(c.relation == builtin("RD") for c in F.atoms)
    for n in (2, 4, 6, 10):
        assert verify_formula(*gen_diamond(n))
        assert verify_formula(*gen_halfgraph(n))
    H, _ = gen_halfgraph(3)
    assert set(H.tuples) == {(i, j) for i in range(3) for j in range(3) if i <= j} and len(H) == 6
    with pytest.raises(InputError):
        gen_diamond(5)
