"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter

from udcsp.cli import DEFAULT_PIN, projection_metric
from udcsp.core import MapFamilyKind, builtin, even_relation
from udcsp.definability import fgpp_definable, formula_to_relation
from udcsp.generators import (enumerate_min_cuts, gen_diamond, gen_halfgraph, gen_mincut, gen_permutation_via_r3,
                              is_sidon, permutation_graph, random_dag, sidon_prime, sidon_set)
from udcsp.patterns import CONNECTOR, apply_to_tuples, interpret_pattern, m_preserves, weak_separability_direct
from udcsp.patterns import check_connector, check_weak_separability
from udcsp.sampling import random_instance, random_permutation, random_zero_valid_onehot
from udcsp.solvers import (count_solutions, enumerate_minimal_assignments, eval_with_bottom, solution_projection,
                           solve_bruteforce, solve_minmax, solve_onehot_2sat, solve_onehot_fpt, solve_sac_median,
                           solve_twinwidth_dp)
from udcsp.width import (BitMatrix, assignment_graph, exact_min_twinwidth, grid_rank, random_contraction_sequence)

SOLVER_SCOPES = [
    ("minmax", solve_minmax, "minmax"),
    ("sac_median", solve_sac_median, "median"),
    ("onehot_2sat", solve_onehot_2sat, "2sat"),
    ("onehot_fpt", solve_onehot_fpt, "fpt"),
    ("twinwidth", solve_twinwidth_dp, "twinwidth"),
]


def test_criterion_1_oracle_equivalence(report):
    bad = []
    for name, solve, scope in SOLVER_SCOPES:
        rng = random.Random(f"c1-{scope}")
        for i in range(1000):
            inst = random_instance(rng, scope, n_max=8, k_max=4, m_max=12)
            truth = solve_bruteforce(inst)
            got = solve(inst)
            if got.sat != truth.sat:
                bad.append((name, i))
            elif got.sat:
                got.verify(inst)
    report("criterion 1 oracle equivalence", not bad, f"5 solvers x 1000 instances, mismatches={bad[:5]}")


def test_criterion_2_pattern_ground_truth(report):
    R3 = builtin("R3")
    ok_r3, wit = m_preserves([R3], CONNECTOR, MapFamilyKind.MONOTONE_AND_ANTI)
    con3 = interpret_pattern(CONNECTOR, 3, MapFamilyKind.MONOTONE_AND_ANTI)
    quoted = [(0, 0), (0, 2), (1, 1), (2, 0), (2, 2)]
    checks = {
        "R3 rejected": not ok_r3 and not check_connector([R3]),
        "witness": wit is not None and [tuple(t) for t in wit["inputs"]] == quoted and tuple(wit["output"]) == (0, 1),
        "quoted image": (0, 1) in apply_to_tuples(con3, quoted),
        "Ra Rb Rc": all(check_connector([builtin(x)]) for x in ("Ra", "Rb", "Rc")),
    }
    ok_nand, w = weak_separability_direct(builtin("Nand2"))
    checks["Nand2"] = not ok_nand and not check_weak_separability(builtin("Nand2")) and w["union"] == [1, 1]
    checks["Even"] = all(check_weak_separability(even_relation(m)) for m in (2, 3, 4))
    failed = [k for k, v in checks.items() if not v]
    report("criterion 2 pattern ground truth", not failed, f"failed={failed}, witness={wit}")


R8_DISPLAYED = [
    [0, 0, 0, 1, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 0, 1, 0],
    [1, 0, 0, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 1, 0, 0, 0],
]


def test_criterion_3_definability_ground_truth(report):
    R3 = builtin("R3")
    failures = []
    for n in range(1, 6):
        for sigma in itertools.permutations(range(n)):
            target = permutation_graph(sigma)
            F = fgpp_definable([R3], MapFamilyKind.MONOTONE, target)
            if F is None or not formula_to_relation(F).same_tuples(target):
                failures.append(sigma)
    lang = [builtin("RD"), builtin("Impl")]
    for n in (4, 6, 8):
        for R, _ in (gen_diamond(n), gen_halfgraph(n)):
            F = fgpp_definable(lang, MapFamilyKind.MONOTONE_AND_ANTI, R)
            if F is None or not formula_to_relation(F).same_tuples(R):
                failures.append(R.name)
    R8, F8 = gen_diamond(8)
    matrix_ok = BitMatrix.from_relation(R8).to_lists() == R8_DISPLAYED
    formula_ok = BitMatrix.from_relation(formula_to_relation(F8)).to_lists() == R8_DISPLAYED
    ok = not failures and matrix_ok and formula_ok
    report("criterion 3 definability ground truth", ok,
           f"153 permutations, diamond/half n=4,6,8, R_8 matrix={matrix_ok}, failures={failures[:5]}")


def test_criterion_4_grid_rank_bound(report):
    rng = random.Random("c4")
    worst = []
    ranks = Counter()
    for _ in range(200):
        inst = random_instance(rng, "connector", n_max=32, k_max=4, m_max=12)
        d = max((c.relation.domain_size for c in inst.constraints), default=2)
        G = assignment_graph(inst)
        for lab in G.nontrivial_labels():
            r = grid_rank(G.labels[lab])
            ranks[r] += 1
            if r > 2 * d:
                worst.append((inst.domain_size, lab, r, d))
    report("criterion 4 grid-rank bound", not worst, f"label ranks {dict(sorted(ranks.items()))}, over={worst[:3]}")


def test_criterion_5_mincut_bijection(report):
    rng = random.Random("c5")
    bad = []
    for i in range(100):
        G = random_dag(rng, rng.randint(2, 7), 10)
        cuts = enumerate_min_cuts(G, G.s, G.t)
        inst = gen_mincut(G)
        if count_solutions(inst) != len(cuts):
            bad.append((i, count_solutions(inst), len(cuts)))
    report("criterion 5 min-cut bijection", not bad, f"100 DAGs, mismatches={bad[:5]}")


def _disjoint_closure(minimal, k, bot):
    closure = {(bot,) * k}
    frontier = set(closure)
    while frontier:
        new = set()
        for a in frontier:
            for m in minimal:
                if all(x == bot or y == bot for x, y in zip(a, m)):
                    u = tuple(y if x == bot else x for x, y in zip(a, m))
                    if u not in closure:
                        new.add(u)
        closure |= new
        frontier = new
    return closure


def test_criterion_6_minimal_assignment_structure(report):
    rng = random.Random("c6")
    bad = []
    for i in range(200):
        inst = random_zero_valid_onehot(rng, n_max=6, k_max=3)
        n, k = inst.domain_size, inst.k
        sat = {a for a in itertools.product(range(n + 1), repeat=k) if eval_with_bottom(inst, a)}
        closure = _disjoint_closure(enumerate_minimal_assignments(inst), k, n)
        if sat != closure:
            bad.append(i)
    report("criterion 6 minimal-assignment structure", not bad, f"200 instances, mismatches={bad[:5]}")


def test_criterion_7_dp_sequence_independence(report):
    rng = random.Random("c7")
    bad = []
    for i in range(200):
        inst = random_instance(rng, "twinwidth", n_max=8, k_max=4, m_max=12)
        G = assignment_graph(inst)
        seqs = {"greedy": None, "exact": exact_min_twinwidth(G),
                "random": random_contraction_sequence(inst.domain_size, rng)}
        verdicts = {}
        for name, seq in seqs.items():
            res = solve_twinwidth_dp(inst, seq)
            if res.sat:
                res.verify(inst)
            verdicts[name] = res.status
        if len(set(verdicts.values())) != 1 or (verdicts["greedy"] == "sat") != solve_bruteforce(inst).sat:
            bad.append((i, verdicts))
    report("criterion 7 DP sequence independence", not bad, f"200 instances, mismatches={bad[:3]}")


def test_criterion_8_sidon(report):
    bad = []
    for n in range(1, 51):
        S, p = sidon_set(n), sidon_prime(n)
        if len(S) != n or len(set(S)) != n or not is_sidon(S) or max(S) > 2 * p * p:
            bad.append(n)
    report("criterion 8 Sidon construction", not bad, f"n=1..50, failing n={bad}")


def test_criterion_9_projection_monitoring(report):
    with open(DEFAULT_PIN) as fh:
        pin = json.load(fh)["ra_projection_max_grid_rank"]
    got = projection_metric(count=500, seed=9)
    rng = random.Random("c9")
    growth = {}
    for n in (4, 8, 16):
        best = 0
        for _ in range(20):
            _, inst = gen_permutation_via_r3(random_permutation(rng, n))
            best = max(best, grid_rank(BitMatrix.from_relation(solution_projection(inst, 0, 1))))
        growth[n] = best
    ok = got <= pin and growth[16] >= 2 and growth[16] >= growth[4]
    report("criterion 9 projection monitoring", ok, f"Ra max={got} pin={pin}, R3 permutation max by n={growth}")
