"""Reduction gadgets and application encodings, each with a semantic verifier."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .core import Constraint, Instance, Relation, UnaryMap, builtin, instance_eval
from .definability import Atom, FgppFormula, formula_to_relation
from .errors import InputError

Arc = Tuple[str, str]


# ---------------------------------------------------------------- digraphs, flows and cuts

@dataclass
class Digraph:
    vertices: List[str]
    arcs: List[Arc]
    s: Optional[str] = None
    t: Optional[str] = None

    def __post_init__(self):
        self.vertices = [str(v) for v in self.vertices]
        self.arcs = [(str(u), str(v)) for u, v in self.arcs]
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise InputError("repeated vertex")
        if len(set(self.arcs)) != len(self.arcs):
            raise InputError("parallel arcs are not allowed")
        for u, v in self.arcs:
            if u == v or u not in vs or v not in vs:
                raise InputError(f"bad arc {(u, v)}")
        if self.s is not None and self.s == self.t:
            raise InputError("s and t must differ")

    def nx(self) -> nx.DiGraph:
        G = nx.DiGraph()
        G.add_nodes_from(self.vertices)
        G.add_edges_from(self.arcs, capacity=1)
        return G

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "arcs": [list(a) for a in self.arcs], "s": self.s, "t": self.t}

    @classmethod
    def from_json(cls, obj: dict) -> "Digraph":
        return cls(obj["vertices"], [tuple(a) for a in obj["arcs"]], obj.get("s"), obj.get("t"))


def flow_paths(G: Digraph, s: str, t: str) -> List[List[Arc]]:
    """Arc-disjoint simple s-t paths forming a maximum flow (unit capacities)."""
    if s not in G.vertices or t not in G.vertices or s == t:
        raise InputError("s and t must be distinct vertices")
    H = G.nx()
    _, flow = nx.maximum_flow(H, s, t, flow_func=nx.algorithms.flow.edmonds_karp)
    used = {(u, v) for u in flow for v, f in flow[u].items() if f > 0}
    paths = []
    while True:
        out = sorted(a for a in used if a[0] == s)
        if not out:
            break
        walk, seen = [], {s: 0}
        cur = s
        while cur != t:
            arc = min(a for a in used if a[0] == cur)
            used.discard(arc)
            walk.append(arc)
            cur = arc[1]
            if cur in seen:
                # drop the cycle just closed
                walk = walk[:seen[cur]]
                seen = {a[0]: i for i, a in enumerate(walk)}
            seen[cur] = len(walk)
        paths.append(walk)
    return paths


def separates(G: Digraph, removed: Iterable[Arc], s: str, t: str) -> bool:
    H = G.nx()
    H.remove_edges_from(removed)
    return not nx.has_path(H, s, t)


def enumerate_min_cuts(G: Digraph, s: str, t: str) -> List[frozenset]:
    """Every minimum-cardinality arc set separating t from s, by enumeration."""
    for size in range(len(G.arcs) + 1):
        found = [frozenset(c) for c in itertools.combinations(G.arcs, size) if separates(G, c, s, t)]
        if found:
            return found
    return []


_COORDINATION = {"iff": "R3", "chain": "Ra", "coupled": "Rb", "dual": "Rc"}


def threshold3(n: int, a: int) -> UnaryMap:
    """[n] -> [3]: 0 below a, 1 at a, 2 above."""
    return UnaryMap.monotone(n, [a, a + 1])


def gen_mincut(G: Digraph, s: Optional[str] = None, t: Optional[str] = None,
               coordination: Sequence[Tuple[Arc, Arc, str]] = ()) -> Instance:
    """Instance over {Impl, Zero} whose solutions are the s-t min cuts of G.

    Variable X_i is the 0-based index of the cut arc on flow path i.  A path
    vertex u followed on path i by arc number a is on the source side
    exactly when X_i >= a.  Reachability between path vertices through
    non-path vertices and non-path arcs becomes an implication, and
    reachability from u to t makes u a sink-side vertex.
    """
    s = G.s if s is None else s
    t = G.t if t is None else t
    paths = flow_paths(G, s, t)
    k = len(paths)
    n = max([len(p) for p in paths] + [1])
    Impl, Zero = builtin("Impl"), builtin("Zero")
    path_arcs = {a for p in paths for a in p}
    position: Dict[str, List[Tuple[int, int]]] = {}
    for i, p in enumerate(paths):
        for a, (u, _) in enumerate(p):
            position.setdefault(u, []).append((i, a))
    on_path = {u for p in paths for arc in p for u in arc}
    # G': non-path arcs; internal vertices must avoid the paths
    H = nx.DiGraph()
    H.add_nodes_from(G.vertices)
    H.add_edges_from(a for a in G.arcs if a not in path_arcs)
    cons: List[Constraint] = []
    for i, p in enumerate(paths):
        if len(p) < n:
            cons.append(Constraint(Zero, (i,), (UnaryMap.geq(n, len(p)),)))
    for u in sorted(position):
        reach = _reach_via_outside(H, u, on_path)
        for v in sorted(reach):
            if v == t:
                for i, a in position[u]:
                    cons.append(Constraint(Zero, (i,), (UnaryMap.geq(n, a),)))
                continue
            for i, a in position[u]:
                for j, b in position.get(v, ()):
                    if (u, i) != (v, j):
                        cons.append(Constraint(Impl, (i, j), (UnaryMap.geq(n, a), UnaryMap.geq(n, b))))
        for (i, a), (j, b) in itertools.permutations(position[u], 2):
            cons.append(Constraint(Impl, (i, j), (UnaryMap.geq(n, a), UnaryMap.geq(n, b))))
    where = {arc: (i, a) for i, p in enumerate(paths) for a, arc in enumerate(p)}
    for e1, e2, kind in coordination:
        e1, e2 = tuple(e1), tuple(e2)
        if kind not in _COORDINATION:
            raise InputError(f"unknown coordination kind {kind!r}")
        if e1 not in where or e2 not in where:
            raise InputError(f"coordination arc off the flow paths: {e1 if e1 not in where else e2}")
        (i, a), (j, b) = where[e1], where[e2]
        cons.append(Constraint(builtin(_COORDINATION[kind]), (i, j), (threshold3(n, a), threshold3(n, b))))
    names = tuple(f"X{i}" for i in range(k))
    return Instance(n, names, _dedupe(cons))


def _reach_via_outside(H: nx.DiGraph, u: str, on_path: set) -> set:
    """Path vertices reachable from u by a nonempty walk whose inner vertices avoid the paths."""
    out, stack, seen = set(), [u], {u}
    while stack:
        x = stack.pop()
        for y in H.successors(x):
            if y in on_path:
                out.add(y)
            elif y not in seen:
                seen.add(y)
                stack.append(y)
    return out


def _dedupe(cons: List[Constraint]) -> Tuple[Constraint, ...]:
    seen, out = set(), []
    for c in cons:
        key = (c.relation.name, c.vars, tuple(m.table for m in c.maps))
        if key not in seen:
            seen.add(key)
            out.append(c)
    return tuple(out)


def mincut_solution_to_cut(G: Digraph, s: str, t: str, assignment: Sequence[int]) -> frozenset:
    paths = flow_paths(G, s, t)
    return frozenset(p[x] for p, x in zip(paths, assignment))


def verify_mincut(G: Digraph, s: Optional[str] = None, t: Optional[str] = None) -> bool:
    from .solvers.bruteforce import all_solutions

    s = G.s if s is None else s
    t = G.t if t is None else t
    inst = gen_mincut(G, s, t)
    cuts = set(enumerate_min_cuts(G, s, t))
    got = {mincut_solution_to_cut(G, s, t, a) for a in all_solutions(inst)} if inst.k else {frozenset()}
    return got == cuts and len(all_solutions(inst)) == len(cuts)


def random_dag(rng, n_vertices: int, max_arcs: int) -> Digraph:
    names = ["s"] + [f"v{i}" for i in range(n_vertices - 2)] + ["t"]
    pairs = [(names[i], names[j]) for i in range(len(names)) for j in range(i + 1, len(names))]
    rng.shuffle(pairs)
    return Digraph(names, sorted(pairs[:rng.randint(1, min(max_arcs, len(pairs)))]), "s", "t")


# ---------------------------------------------------------------- multicoloured clique

def gen_multicoloured_clique(edges: Iterable[Tuple[str, str]], k: int, coloring: Dict[str, int]) -> Instance:
    """Instance over {Eq} with arbitrary maps; SAT iff a multicoloured k-clique exists.

    x_{i,j} ranges over arcs (u,v) with u coloured i and v coloured j,
    serialised lexicographically into [n]; unused values are excluded by a
    unary equality against a constant.
    """
    classes = {i: sorted(v for v, c in coloring.items() if c == i) for i in range(k)}
    for i in range(k):
        if not classes[i]:
            raise InputError(f"colour class {i} is empty")
    E = set()
    for u, v in edges:
        E.add((str(u), str(v)))
        E.add((str(v), str(u)))
    pairs = [(i, j) for i in range(k) for j in range(k) if i != j]
    dom = {p: sorted((u, v) for u in classes[p[0]] for v in classes[p[1]] if (u, v) in E) for p in pairs}
    n = max([len(d) for d in dom.values()] + [1])
    idx = {p: {val: x for x, val in enumerate(dom[p])} for p in pairs}
    var = {p: a for a, p in enumerate(pairs)}
    Eq = builtin("Eq")
    one = UnaryMap.from_table([1] * n, 2)
    cons: List[Constraint] = []
    for p in pairs:
        if len(dom[p]) < n:
            real = UnaryMap.from_table([1 if x < len(dom[p]) else 0 for x in range(n)], 2)
            cons.append(Constraint(Eq, (var[p], var[p]), (real, one)))
    for p, q in itertools.permutations(pairs, 2):
        if p[0] != q[0] or not p < q:
            continue
        i = p[0]
        for u in classes[i]:
            f = UnaryMap.from_table([1 if x < len(dom[p]) and dom[p][x][0] == u else 0 for x in range(n)], 2)
            g = UnaryMap.from_table([1 if x < len(dom[q]) and dom[q][x][0] == u else 0 for x in range(n)], 2)
            cons.append(Constraint(Eq, (var[p], var[q]), (f, g)))
    for (i, j) in pairs:
        if i > j:
            continue
        for (u, v), x in idx[(i, j)].items():
            y = idx[(j, i)][(v, u)]
            cons.append(Constraint(Eq, (var[(i, j)], var[(j, i)]), (UnaryMap.onehot(n, x), UnaryMap.onehot(n, y))))
    names = tuple(f"x{i}_{j}" for i, j in pairs)
    return Instance(n, names, tuple(cons))


def has_multicoloured_clique(edges, k: int, coloring: Dict[str, int]) -> bool:
    E = {frozenset((str(u), str(v))) for u, v in edges}
    classes = [sorted(v for v, c in coloring.items() if c == i) for i in range(k)]
    for pick in itertools.product(*classes):
        if all(frozenset((a, b)) in E for a, b in itertools.combinations(pick, 2)):
            return True
    return False


def verify_multicoloured_clique(edges, k: int, coloring: Dict[str, int]) -> bool:
    from .solvers.bruteforce import solve_bruteforce

    return solve_bruteforce(gen_multicoloured_clique(edges, k, coloring)).sat == has_multicoloured_clique(
        edges, k, coloring)


# ---------------------------------------------------------------- exact 3-hitting set

def gen_exact_3hs(S: Iterable, C: Sequence[Sequence]) -> Instance:
    """One variable per set over [3]; Eq([x_i=a],[x_j=b]) whenever set i slot a equals set j slot b."""
    S = set(S)
    sets = [list(c) for c in C]
    for c in sets:
        if len(c) != 3 or len(set(c)) != 3:
            raise InputError(f"set {c} does not have three distinct elements")
        if not set(c) <= S:
            raise InputError(f"set {c} uses elements outside the ground set")
    Eq = builtin("Eq")
    cons = []
    for i, j in itertools.combinations(range(len(sets)), 2):
        for a in range(3):
            for b in range(3):
                if sets[i][a] == sets[j][b]:
                    cons.append(Constraint(Eq, (i, j), (UnaryMap.onehot(3, a), UnaryMap.onehot(3, b))))
    return Instance(3, tuple(f"x{i}" for i in range(len(sets))), tuple(cons))


def has_exact_hitting_set(S: Iterable, C: Sequence[Sequence]) -> bool:
    S = sorted(set(S), key=repr)
    for r in range(len(S) + 1):
        for pick in itertools.combinations(S, r):
            chosen = set(pick)
            if all(len(chosen & set(c)) == 1 for c in C):
                return True
    return False


def verify_exact_3hs(S, C) -> bool:
    from .solvers.bruteforce import solve_bruteforce

    return solve_bruteforce(gen_exact_3hs(S, C)).sat == has_exact_hitting_set(S, C)


# ---------------------------------------------------------------- not-all-equal

def gen_nae(clauses: Sequence[Sequence[Tuple[int, int]]], n: int, k: int) -> Instance:
    """NAE([x_i <= a], [x_j <= b], [x_l <= c]) per clause; values and thresholds are 0-based."""
    R = builtin("NAE")
    cons = []
    for cl in clauses:
        if len(cl) != 3:
            raise InputError("NAE clauses have three literals")
        for v, a in cl:
            if not (0 <= v < k and 0 <= a < n):
                raise InputError(f"literal {(v, a)} out of range")
        cons.append(Constraint(R, tuple(v for v, _ in cl), tuple(UnaryMap.leq(n, a) for _, a in cl)))
    return Instance(n, tuple(f"x{i}" for i in range(k)), tuple(cons))


def nae_direct(clauses, assignment: Sequence[int]) -> bool:
    for cl in clauses:
        vals = {assignment[v] <= a for v, a in cl}
        if len(vals) == 1:
            return False
    return True


def verify_nae(clauses, n: int, k: int) -> bool:
    inst = gen_nae(clauses, n, k)
    return all(instance_eval(inst, a) == nae_direct(clauses, a) for a in itertools.product(range(n), repeat=k))


# ---------------------------------------------------------------- permutations

def permutation_graph(sigma: Sequence[int]) -> Relation:
    return Relation("sigma", len(sigma), 2, [(a, b) for a, b in enumerate(sigma)])


def _check_perm(sigma: Sequence[int]) -> List[int]:
    sigma = [int(x) for x in sigma]
    if sorted(sigma) != list(range(len(sigma))) or not sigma:
        raise InputError(f"{sigma} is not a permutation of [n]")
    return sigma


def gen_permutation_via_r3(sigma: Sequence[int]) -> Tuple[FgppFormula, Instance]:
    """R3(f_a(x), f_b(y)) for each pair of the graph: x = a iff y = b."""
    sigma = _check_perm(sigma)
    n = len(sigma)
    R3 = builtin("R3")
    atoms = tuple(Atom(R3, (0, 1), (threshold3(n, a), threshold3(n, b))) for a, b in enumerate(sigma))
    F = FgppFormula(2, n, atoms)
    inst = Instance(n, ("x", "y"), tuple(Constraint(a.relation, (0, 1), a.maps) for a in atoms))
    return F, inst


def gen_even4_permutation(sigma: Sequence[int]) -> Instance:
    """Even4([x>=i],[x>=i+1],[y>=j],[y>=j+1]) per pair; the xor of each pair is a one-hot bracket."""
    sigma = _check_perm(sigma)
    n = len(sigma)
    E4 = builtin("Even4")
    cons = []
    for i, j in enumerate(sigma):
        maps = (UnaryMap.geq(n, i), UnaryMap.geq(n, i + 1), UnaryMap.geq(n, j), UnaryMap.geq(n, j + 1))
        cons.append(Constraint(E4, (0, 0, 1, 1), maps))
    return Instance(n, ("x", "y"), tuple(cons))


def verify_permutation(sigma: Sequence[int]) -> bool:
    from .solvers.bruteforce import all_solutions

    target = permutation_graph(sigma)
    F, inst = gen_permutation_via_r3(sigma)
    via_r3 = set(all_solutions(inst))
    via_even = set(all_solutions(gen_even4_permutation(sigma)))
    return formula_to_relation(F).same_tuples(target) and via_r3 == via_even == set(target.tuples)


# ---------------------------------------------------------------- Sidon sets

def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def sidon_prime(n: int) -> int:
    p = max(3, n)
    while not (_is_prime(p) and p % 2):
        p += 1
    return p


def sidon_set(n: int, variant: str = "spread") -> List[int]:
    """Sidon set of n elements from the least odd prime p >= n.

    The default spreads the blocks: 2pa + (a^2 mod p), all below 2p^2.
    ``variant="literal"`` gives pa + (a^2 mod p), which agrees on tiny n
    but collides from n = 8 on (26 + 58 = 42 + 42 with p = 11).
    """
    if n < 1:
        raise InputError("n must be positive")
    if variant not in ("spread", "literal"):
        raise InputError(f"unknown Sidon variant {variant!r}")
    p = sidon_prime(n)
    step = 2 * p if variant == "spread" else p
    return [step * a + (a * a) % p for a in range(n)]


def is_sidon(S: Sequence[int]) -> bool:
    sums = [a + b for a, b in itertools.combinations_with_replacement(sorted(S), 2)]
    return len(sums) == len(set(sums))


# ---------------------------------------------------------------- diamond and half graph

def diamond_relation(n: int) -> Relation:
    if n % 2 or n < 2:
        raise InputError("the diamond relation needs an even n >= 2")
    h = n // 2
    tuples = []
    for i in range(n):
        ii = i if i < h else n - 1 - i
        for j in (h - 1 - ii, h + ii):
            tuples.append((i, j))
    return Relation(f"R_{n}", n, 2, tuples)


def _band(n: int, a: int) -> UnaryMap:
    """0 up to a, 2 from n-1-a on, 1 between."""
    return UnaryMap.monotone(n, [a + 1, n - 1 - a])


def gen_diamond(n: int) -> Tuple[Relation, FgppFormula]:
    R = diamond_relation(n)
    h = n // 2
    RD = builtin("RD")
    atoms = tuple(Atom(RD, (0, 1), (_band(n, a), _band(n, h - 2 - a))) for a in range(h - 1))
    return R, FgppFormula(2, n, atoms)


def gen_halfgraph(n: int) -> Tuple[Relation, FgppFormula]:
    if n < 1:
        raise InputError("n must be positive")
    R = Relation(f"H_{n}", n, 2, [(i, j) for i in range(n) for j in range(i, n)])
    Impl = builtin("Impl")
    atoms = tuple(Atom(Impl, (0, 1), (UnaryMap.geq(n, i), UnaryMap.geq(n, i))) for i in range(1, n))
    return R, FgppFormula(2, n, atoms)


def verify_formula(R: Relation, F: FgppFormula) -> bool:
    return formula_to_relation(F).same_tuples(R)


# ---------------------------------------------------------------- x + y = z

def sum_relation(n: int) -> Relation:
    return Relation.from_predicate("Sum", n, 3, lambda t: t[0] + t[1] == t[2])


def sum_grid_witness(p: int):
    """(A, B, S, T) on {x+y=z} over [p^2] whose matrix stacks floor(p/2) identities."""
    if p < 2:
        raise InputError("p must be at least 2")
    S = [(p * p - (2 * i + 1) * p - j, 2 * i * p + 2 * j) for i in range(p // 2) for j in range(p)]
    T = [(z,) for z in range(p * p - p, p * p)]
    return [0, 1], [2], S, T


__all__ = [
    "Digraph", "flow_paths", "separates", "enumerate_min_cuts", "gen_mincut", "mincut_solution_to_cut",
    "verify_mincut", "random_dag", "gen_multicoloured_clique", "has_multicoloured_clique",
    "verify_multicoloured_clique", "gen_exact_3hs", "has_exact_hitting_set", "verify_exact_3hs", "gen_nae",
    "nae_direct", "verify_nae", "permutation_graph", "gen_permutation_via_r3", "gen_even4_permutation",
    "verify_permutation", "sidon_prime", "sidon_set", "is_sidon", "diamond_relation", "gen_diamond",
    "gen_halfgraph", "verify_formula", "sum_relation", "sum_grid_witness", "threshold3",
]
