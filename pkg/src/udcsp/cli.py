"""Command-line entry point.

Exit codes: 0 success (or SAT), 1 negative answer (UNSAT, undefinable,
disagreement, regression), 2 error.  Diagnostics go to stderr as one JSON
object per line; results go to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import List, Optional

from . import budget, generators
from .core import MapFamilyKind, Relation, builtin, builtin_relations
from .definability import fgpp_definable
from .errors import InputError, UdcspError
from .io import instance_to_json, load_instance, read_matrix, relation_from_json, relation_to_json, relations_from_json
from .patterns import classify_language
from .sampling import random_permutation
from .solvers import (SOLVERS, binarize_instance, count_solutions, solution_projection, solve_bruteforce,
                      solve_twinwidth_dp, solve_twinwidth_dp_weighted)
from .width import (BitMatrix, ContractionSequence, assignment_graph, exact_min_twinwidth, greedy_contraction_sequence,
                    grid_rank, sequence_width)

ALGOS = SOLVERS

# scope of random instances used by oracle-compare for each algorithm
ALGO_SCOPE = {"minmax": "minmax", "minmax-max": "minmax", "median": "median", "onehot2sat": "2sat",
              "onehotfpt": "fpt", "twinwidth": "twinwidth", "auto": "twinwidth", "oracle": "twinwidth"}

FAMILIES = {"mo": MapFamilyKind.MONOTONE, "anti": MapFamilyKind.ANTIMONOTONE,
            "mo-anti": MapFamilyKind.MONOTONE_AND_ANTI, "all": MapFamilyKind.ALL,
            "onehot": MapFamilyKind.ONEHOT, "id": MapFamilyKind.ID}

DEFAULT_PIN = os.path.join(os.path.dirname(__file__), "data", "corpus.json")


def diag(**fields) -> None:
    print(json.dumps(fields, sort_keys=True), file=sys.stderr)


def emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_language(arg: str) -> List[Relation]:
    """Comma-separated built-in names, or a JSON file holding a relations object."""
    if os.path.exists(arg):
        obj = _read_json(arg)
        if "relations" in obj:
            obj = obj["relations"]
        return list(relations_from_json(obj).values())
    known = builtin_relations()
    out = []
    for name in filter(None, (s.strip() for s in arg.split(","))):
        if name not in known:
            raise InputError(f"unknown relation {name!r}")
        out.append(known[name])
    if not out:
        raise InputError("empty language")
    return out


def load_relation(arg: str) -> Relation:
    if os.path.exists(arg):
        obj = _read_json(arg)
        if "tuples" in obj:
            return relation_from_json(obj.get("name", "target"), obj)
        rels = list(relations_from_json(obj.get("relations", obj)).values())
        if len(rels) != 1:
            raise InputError("target file must hold exactly one relation")
        return rels[0]
    if arg.startswith("diamond:") or arg.startswith("half:"):
        kind, _, n = arg.partition(":")
        R, _ = (generators.gen_diamond if kind == "diamond" else generators.gen_halfgraph)(int(n))
        return R
    if arg.startswith("perm:"):
        return generators.permutation_graph([int(x) for x in arg[5:].split(",")])
    return builtin(arg)


# ---------------------------------------------------------------- commands

def cmd_solve(args) -> int:
    inst = load_instance(args.file)
    if args.weighted:
        if args.algo not in ("twinwidth", "auto"):
            raise InputError("--weighted works with --algo twinwidth or auto")
        seq = ContractionSequence.from_json(_read_json(args.seq)) if args.seq else None
        res = solve_twinwidth_dp_weighted(binarize_instance(inst), seq)
    elif args.algo == "twinwidth":
        seq = ContractionSequence.from_json(_read_json(args.seq)) if args.seq else None
        res = solve_twinwidth_dp(binarize_instance(inst), seq)
    else:
        res = ALGOS[args.algo](inst)
    emit(res.to_json(inst))
    return 0 if res.sat else 1


def cmd_classify(args) -> int:
    gamma = load_language(args.language)
    onehot = {"auto": None, "yes": True, "no": False}[args.onehot]
    emit(classify_language(gamma, onehot=onehot).as_json())
    return 0


def cmd_fgpp(args) -> int:
    gamma = load_language(args.language)
    R = load_relation(args.target)
    F = fgpp_definable(gamma, FAMILIES[args.family], R)
    if F is None:
        emit("undefinable")
        return 1
    emit(F.to_json())
    return 0


def cmd_gridrank(args) -> int:
    with open(args.file) as fh:
        M = BitMatrix.from_lists(read_matrix(fh.read()))
    emit(grid_rank(M, args.kmax, variant=args.variant))
    return 0


def cmd_contract(args) -> int:
    inst = load_instance(args.file)
    G = assignment_graph(inst)
    if args.exact:
        seq = exact_min_twinwidth(G)
        width = sequence_width(G, seq)
    else:
        seq, width = greedy_contraction_sequence(G)
    out = seq.to_json()
    out["width"] = width
    emit(out)
    return 0


def _provenance(name: str, **params) -> dict:
    return {"generator": name, "params": params}


def cmd_generate(args) -> int:
    rng = random.Random(args.seed)
    kind = args.kind
    if kind == "sidon":
        S = generators.sidon_set(args.n, variant=args.variant)
        emit({"p": generators.sidon_prime(args.n), "set": S, "sidon": generators.is_sidon(S)})
        return 0
    if kind in ("diamond", "halfgraph"):
        R, F = (generators.gen_diamond if kind == "diamond" else generators.gen_halfgraph)(args.n)
        emit({"relation": relation_to_json(R), "formula": F.to_json(), "verified": generators.verify_formula(R, F)})
        return 0
    if kind in ("permutation", "even4"):
        sigma = [int(x) for x in args.sigma.split(",")] if args.sigma else random_permutation(rng, args.n)
        if kind == "permutation":
            _, inst = generators.gen_permutation_via_r3(sigma)
        else:
            inst = generators.gen_even4_permutation(sigma)
        emit(instance_to_json(inst, _provenance(kind, sigma=sigma)))
        return 0
    if kind == "mincut":
        if args.graph:
            G = generators.Digraph.from_json(_read_json(args.graph))
        else:
            G = generators.random_dag(rng, args.vertices, args.arcs)
        emit(instance_to_json(generators.gen_mincut(G), _provenance("mincut", graph=G.to_json())))
        return 0
    if kind == "clique":
        if args.graph:
            obj = _read_json(args.graph)
            edges, k, col = obj["edges"], int(obj["k"]), {str(v): int(c) for v, c in obj["coloring"].items()}
        else:
            k = args.k
            col = {f"u{i}": i % k for i in range(args.vertices)}
            names = sorted(col)
            edges = [(a, b) for i, a in enumerate(names) for b in names[i + 1:]
                     if col[a] != col[b] and rng.random() < 0.5]
        inst = generators.gen_multicoloured_clique(edges, k, col)
        emit(instance_to_json(inst, _provenance("clique", edges=[list(e) for e in edges], k=k, coloring=col)))
        return 0
    if kind == "hs3":
        if args.sets:
            C = [list(s) for s in args.sets.split(",")]
        else:
            ground = [chr(ord("a") + i) for i in range(args.n)]
            C = [rng.sample(ground, 3) for _ in range(args.m)]
        S = sorted({x for c in C for x in c})
        emit(instance_to_json(generators.gen_exact_3hs(S, C), _provenance("hs3", sets=C)))
        return 0
    if kind == "nae":
        clauses = [[(rng.randrange(args.k), rng.randrange(args.n)) for _ in range(3)] for _ in range(args.m)]
        inst = generators.gen_nae(clauses, args.n, args.k)
        emit(instance_to_json(inst, _provenance("nae", clauses=[[list(l) for l in c] for c in clauses])))
        return 0
    raise InputError(f"unknown generator {kind!r}")


def cmd_oracle_compare(args) -> int:
    from .sampling import random_instance

    solver = ALGOS[args.algo]
    if args.files:
        items = [(f, load_instance(f)) for f in args.files]
    else:
        rng = random.Random(args.seed)
        scope = args.scope or ALGO_SCOPE[args.algo]
        items = [(f"random[{i}]", random_instance(rng, scope)) for i in range(args.count)]
    disagreements = 0
    for label, inst in items:
        truth = solve_bruteforce(inst).sat
        got = solver(inst).sat
        if got != truth:
            disagreements += 1
            diag(event="disagreement", instance=label, oracle=truth, solver=got)
    emit({"algo": args.algo, "instances": len(items), "disagreements": disagreements,
          "agree": disagreements == 0})
    return 0 if disagreements == 0 else 1


def projection_metric(count: int = 500, seed: int = 9) -> int:
    """Largest grid-rank of a two-variable solution projection over seeded Ra instances."""
    from .sampling import ra_projection_instance

    rng = random.Random(seed)
    best = 0
    for _ in range(count):
        inst = ra_projection_instance(rng)
        M = BitMatrix.from_relation(solution_projection(inst, 0, 1))
        best = max(best, grid_rank(M))
    return best


def corpus_entries(seed: int = 0) -> dict:
    """Seeded generator instances whose statuses are pinned."""
    rng = random.Random(seed)
    out = {}
    for i in range(10):
        G = generators.random_dag(rng, rng.randint(3, 6), 10)
        out[f"mincut-{i}"] = generators.gen_mincut(G)
    for n in (3, 5, 8):
        out[f"perm-r3-{n}"] = generators.gen_permutation_via_r3(random_permutation(rng, n))[1]
        out[f"perm-even4-{n}"] = generators.gen_even4_permutation(random_permutation(rng, n))
    for i in range(5):
        C = [rng.sample("abcdef", 3) for _ in range(4)]
        out[f"hs3-{i}"] = generators.gen_exact_3hs(sorted({x for c in C for x in c}), C)
    for i in range(5):
        clauses = [[(rng.randrange(3), rng.randrange(4)) for _ in range(3)] for _ in range(6)]
        out[f"nae-{i}"] = generators.gen_nae(clauses, 4, 3)
    return out


def corpus_snapshot() -> dict:
    from .solvers import solve_auto

    statuses = {}
    for name, inst in corpus_entries().items():
        statuses[name] = {"count": count_solutions(inst), "auto": solve_auto(inst).status}
    return {"ra_projection_max_grid_rank": projection_metric(), "instances": statuses}


def cmd_corpus(args) -> int:
    snap = corpus_snapshot()
    if args.action == "update" or not os.path.exists(args.pin):
        os.makedirs(os.path.dirname(os.path.abspath(args.pin)), exist_ok=True)
        with open(args.pin, "w") as fh:
            json.dump(snap, fh, indent=2, sort_keys=True)
            fh.write("\n")
        emit({"pinned": args.pin, **snap})
        return 0
    pin = _read_json(args.pin)
    problems = []
    if snap["ra_projection_max_grid_rank"] > pin["ra_projection_max_grid_rank"]:
        problems.append("projection grid-rank above pin")
    for name, want in pin["instances"].items():
        if snap["instances"].get(name) != want:
            problems.append(f"{name}: {snap['instances'].get(name)} != {want}")
    emit({"regressions": problems, "ok": not problems, **snap})
    return 0 if not problems else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="udcsp", description="Few-variable CSPs over large ordered domains.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("file")
    s.add_argument("--algo", choices=sorted(ALGOS), default="auto")
    s.add_argument("--seq", help="contraction sequence JSON for the twin-width solver")
    s.add_argument("--weighted", action="store_true", help="minimise the instance weights")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("classify", help="classify a constraint language")
    c.add_argument("language", help="JSON relations file or comma-separated built-in names")
    c.add_argument("--onehot", choices=("auto", "yes", "no"), default="auto")
    c.set_defaults(func=cmd_classify)

    f = sub.add_parser("fgpp", help="search for a definition of a relation")
    f.add_argument("--language", required=True)
    f.add_argument("--target", required=True, help="built-in name, JSON file, diamond:N, half:N or perm:a,b,...")
    f.add_argument("--family", choices=sorted(FAMILIES), default="mo")
    f.set_defaults(func=cmd_fgpp)

    g = sub.add_parser("gridrank", help="grid-rank of a 0/1 matrix file")
    g.add_argument("file")
    g.add_argument("--kmax", type=int)
    g.add_argument("--variant", choices=("rank", "distinct"), default="rank")
    g.set_defaults(func=cmd_gridrank)

    t = sub.add_parser("contract", help="contraction sequence of an instance's assignment graph")
    t.add_argument("file")
    t.add_argument("--exact", action="store_true", help="search for an optimal sequence (tiny domains)")
    t.set_defaults(func=cmd_contract)

    gen = sub.add_parser("generate", help="emit a reduction gadget")
    gen.add_argument("kind", choices=("sidon", "diamond", "halfgraph", "permutation", "even4", "mincut", "clique",
                                      "hs3", "nae"))
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--n", type=int, default=4)
    gen.add_argument("--k", type=int, default=3)
    gen.add_argument("--m", type=int, default=4)
    gen.add_argument("--sigma")
    gen.add_argument("--graph")
    gen.add_argument("--sets", help="comma-separated three-letter sets, e.g. abc,abd")
    gen.add_argument("--vertices", type=int, default=6)
    gen.add_argument("--arcs", type=int, default=10)
    gen.add_argument("--variant", choices=("spread", "literal"), default="spread")
    gen.set_defaults(func=cmd_generate)

    o = sub.add_parser("oracle-compare", help="compare a solver with brute force")
    o.add_argument("files", nargs="*")
    o.add_argument("--algo", choices=sorted(ALGOS), required=True)
    o.add_argument("--seed", type=int, required=True)
    o.add_argument("--count", type=int, default=50)
    o.add_argument("--scope", help="random instance scope (defaults to the algorithm's)")
    o.set_defaults(func=cmd_oracle_compare)

    r = sub.add_parser("corpus", help="check or refresh the pinned regression corpus")
    r.add_argument("action", choices=("run", "update"))
    r.add_argument("--pin", default=DEFAULT_PIN)
    r.set_defaults(func=cmd_corpus)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        budget.get("bruteforce")
        return args.func(args)
    except UdcspError as exc:
        diag(error=exc.kind, message=str(exc))
        return 2
    except OSError as exc:
        diag(error="input", message=str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
