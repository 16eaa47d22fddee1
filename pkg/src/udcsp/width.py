"""GF(2) rank, grid-rank, assignment graphs and contraction sequences."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import budget, kernels
from .core import Instance, Relation
from .errors import InputError


class BitMatrix:
    """Dense 0/1 matrix with rows and columns packed into ints (bit j = column j)."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[int]):
        if nrows < 1 or ncols < 1:
            raise InputError("matrix dimensions must be positive")
        if len(rows) != nrows:
            raise InputError("row count mismatch")
        self.nrows, self.ncols = nrows, ncols
        full = (1 << ncols) - 1
        self.rows = tuple(int(r) & full for r in rows)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        if not rows or len({len(r) for r in rows}) != 1:
            raise InputError("rows must be nonempty and equally long")
        return cls(len(rows), len(rows[0]), [sum(1 << j for j, v in enumerate(r) if v) for r in rows])

    @classmethod
    def from_relation(cls, R: Relation) -> "BitMatrix":
        if R.arity != 2:
            raise InputError("adjacency matrices come from binary relations")
        d = R.domain_size
        rows = [0] * d
        for a, b in R:
            rows[a] |= 1 << b
        return cls(d, d, rows)

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> List[List[int]]:
        return [[self.get(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def columns(self) -> List[int]:
        return [sum(((r >> j) & 1) << i for i, r in enumerate(self.rows)) for j in range(self.ncols)]

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.ncols, self.nrows, self.columns())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "BitMatrix":
        return BitMatrix(len(rows), len(cols),
                         [sum(((self.rows[i] >> c) & 1) << j for j, c in enumerate(cols)) for i in rows])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.rows) == (other.nrows, other.ncols, other.rows)

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


def _as_matrix(M) -> BitMatrix:
    return M if isinstance(M, BitMatrix) else BitMatrix.from_lists(M)


def gf2_rank(M) -> int:
    M = _as_matrix(M)
    return kernels.gf2_rank(M.rows, M.ncols)


def _distinct_division(M: BitMatrix, k: int) -> Optional[Tuple[List[int], List[int]]]:
    """k-division where every zone has >= k distinct rows or >= k distinct columns."""
    if k == 1:
        return ([], [])
    if M.nrows < k or M.ncols < k:
        return None
    cols = M.columns()

    def zone_ok(r0, r1, c0, c1):
        rmask = ((1 << r1) - 1) ^ ((1 << r0) - 1)
        cmask = ((1 << c1) - 1) ^ ((1 << c0) - 1)
        if len({M.rows[i] & cmask for i in range(r0, r1)}) >= k:
            return True
        return len({cols[j] & rmask for j in range(c0, c1)}) >= k

    for rc in itertools.combinations(range(1, M.nrows), k - 1):
        rb = [0, *rc, M.nrows]
        c, ccuts = 0, []
        ok = True
        for j in range(k):
            if j == k - 1:
                e = M.ncols
                if not all(zone_ok(rb[i], rb[i + 1], c, e) for i in range(k)):
                    ok = False
                break
            e = c + 1
            while e <= M.ncols - (k - 1 - j) and not all(zone_ok(rb[i], rb[i + 1], c, e) for i in range(k)):
                e += 1
            if e > M.ncols - (k - 1 - j):
                ok = False
                break
            ccuts.append(e)
            c = e
        if ok:
            return list(rc), ccuts
    return None


def grid_division(M, k: int, variant: str = "rank") -> Optional[Tuple[List[int], List[int]]]:
    """A witnessing k-division (row cuts, column cuts), or None."""
    M = _as_matrix(M)
    if variant == "distinct":
        return _distinct_division(M, k)
    if variant != "rank":
        raise InputError(f"unknown grid-rank variant {variant!r}")
    if M.nrows <= M.ncols:
        return kernels.division_exists(M.columns(), M.nrows, k)
    found = kernels.division_exists(list(M.rows), M.ncols, k)
    return None if found is None else (found[1], found[0])


def grid_rank(M, k_max: Optional[int] = None, variant: str = "rank") -> int:
    """Largest k <= k_max with a k-division whose zones all have GF(2) rank >= k.

    The property is monotone in k (merging blocks keeps ranks), so the
    search stops at the first k that fails.  ``variant="distinct"``
    counts distinct rows or columns instead of rank.
    """
    M = _as_matrix(M)
    budget.check("grid", max(M.nrows, M.ncols), "grid-rank matrix side")
    if k_max is None:
        k_max = min(M.nrows, M.ncols)
    best = 0
    for k in range(1, k_max + 1):
        if grid_division(M, k, variant) is None:
            break
        best = k
    return best


def grid_rank_exhaustive(M, k_max: int) -> int:
    """Every pair of cut sets; an oracle for tiny matrices."""
    M = _as_matrix(M)
    best = 0
    for k in range(1, k_max + 1):
        hit = False
        for rc in itertools.combinations(range(1, M.nrows), k - 1):
            rb = [0, *rc, M.nrows]
            for cc in itertools.combinations(range(1, M.ncols), k - 1):
                cb = [0, *cc, M.ncols]
                if all(gf2_rank(M.submatrix(range(rb[i], rb[i + 1]), range(cb[j], cb[j + 1]))) >= k
                       for i in range(k) for j in range(k)):
                    hit = True
                    break
            if hit:
                break
        if hit:
            best = k
    return best


# ---------------------------------------------------------------- assignment graphs

@dataclass
class AssignmentGraph:
    """Values [n]; one permitted-pairs matrix per ordered variable pair, plus unary masks."""

    n: int
    k: int
    labels: Dict[Tuple[int, int], BitMatrix]
    unary: List[int]

    def matrix(self, v: int, w: int) -> BitMatrix:
        return self.labels[(v, w)]

    def nontrivial_labels(self) -> List[Tuple[int, int]]:
        full = (1 << self.n) - 1
        return [l for l, M in self.labels.items() if any(r != full for r in M.rows)]


def assignment_graph(inst: Instance) -> AssignmentGraph:
    n, k = inst.domain_size, inst.k
    unary = [(1 << n) - 1] * k
    pair_cons: Dict[Tuple[int, int], list] = {}
    for c in inst.constraints:
        scope = c.scope()
        if len(scope) > 2:
            raise InputError("assignment graphs need constraints on at most two variables")
        if len(scope) == 1:
            v = scope[0]
            a = [0] * k
            for x in range(n):
                a[v] = x
                if c.image(a) not in c.relation:
                    unary[v] &= ~(1 << x)
        else:
            v, w = sorted(scope)
            pair_cons.setdefault((v, w), []).append(c)
    labels: Dict[Tuple[int, int], BitMatrix] = {}
    for v in range(k):
        for w in range(v + 1, k):
            rows = []
            a = [0] * k
            for i in range(n):
                row = 0
                if (unary[v] >> i) & 1:
                    a[v] = i
                    for j in range(n):
                        if not (unary[w] >> j) & 1:
                            continue
                        a[w] = j
                        if all(c.image(a) in c.relation for c in pair_cons.get((v, w), ())):
                            row |= 1 << j
                rows.append(row)
            M = BitMatrix(n, n, rows)
            labels[(v, w)] = M
            labels[(w, v)] = M.transpose()
    return AssignmentGraph(n, k, labels, unary)


# ---------------------------------------------------------------- contraction sequences

@dataclass
class ContractionSequence:
    """Merges over bag ids; bags 0..n-1 are singletons, merge i creates bag n+i."""

    n: int
    merges: List[Tuple[int, int]] = field(default_factory=list)

    def validate(self) -> None:
        if len(self.merges) != self.n - 1:
            raise InputError(f"need {self.n - 1} merges, got {len(self.merges)}")
        alive = set(range(self.n))
        for step, (a, b) in enumerate(self.merges):
            if a == b or a not in alive or b not in alive:
                raise InputError(f"merge {step} uses a dead or repeated bag: {(a, b)}")
            alive -= {a, b}
            alive.add(self.n + step)

    def bags(self) -> Iterable[Tuple[int, int, int, Dict[int, frozenset]]]:
        """Replay, yielding (new id, a, b, live bags) after each merge."""
        live = {i: frozenset([i]) for i in range(self.n)}
        for step, (a, b) in enumerate(self.merges):
            new = self.n + step
            live[new] = live.pop(a) | live.pop(b)
            yield new, a, b, live

    def to_json(self) -> dict:
        return {"n": self.n, "merges": [list(m) for m in self.merges]}

    @classmethod
    def from_json(cls, obj: dict) -> "ContractionSequence":
        try:
            seq = cls(int(obj["n"]), [tuple(int(x) for x in m) for m in obj["merges"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed contraction sequence: {exc}") from exc
        seq.validate()
        return seq


class RedGraph:
    """Red edges between live bags, kept under merges with packed row/column masks."""

    def __init__(self, G: AssignmentGraph):
        self.G = G
        labs = G.nontrivial_labels()
        self.rowm = [G.labels[l].rows for l in labs]
        self.members: Dict[int, List[int]] = {i: [i] for i in range(G.n)}
        self.mask: Dict[int, int] = {i: 1 << i for i in range(G.n)}
        self.red: Dict[int, set] = {i: set() for i in range(G.n)}
        self.next_id = G.n

    def mixed(self, X: Sequence[int], ymask: int) -> bool:
        for rows in self.rowm:
            first = rows[X[0]] & ymask
            if first != 0 and first != ymask:
                return True
            for i in X[1:]:
                if rows[i] & ymask != first:
                    return True
        return False

    def is_red(self, a: int, b: int) -> bool:
        return b in self.red[a]

    def _red_between(self, xa: List[int], xm: int, b: int) -> bool:
        # labels come in transposed pairs, so one orientation covers both
        return self.mixed(xa, self.mask[b])

    def preview(self, a: int, b: int) -> Tuple[set, int]:
        """Red neighbours of the merged bag and resulting maximum red degree."""
        xa = self.members[a] + self.members[b]
        xm = self.mask[a] | self.mask[b]
        nbr = set()
        for c in self.members:
            if c in (a, b):
                continue
            if c in self.red[a] or c in self.red[b] or self._red_between(xa, xm, c):
                nbr.add(c)
        deg = len(nbr)
        for c in self.members:
            if c in (a, b):
                continue
            dc = len(self.red[c] - {a, b}) + (1 if c in nbr else 0)
            deg = max(deg, dc)
        return nbr, deg

    def merge(self, a: int, b: int) -> Tuple[int, int]:
        nbr, deg = self.preview(a, b)
        new = self.next_id
        self.next_id += 1
        self.members[new] = self.members.pop(a) + self.members.pop(b)
        self.mask[new] = self.mask.pop(a) | self.mask.pop(b)
        self.red.pop(a)
        self.red.pop(b)
        for c in self.red:
            self.red[c] -= {a, b}
        self.red[new] = set(nbr)
        for c in nbr:
            self.red[c].add(new)
        return new, deg

    def max_degree(self) -> int:
        return max((len(s) for s in self.red.values()), default=0)


def _naive_red(G: AssignmentGraph, live: Dict[int, frozenset]) -> Dict[int, set]:
    red = {b: set() for b in live}
    ids = sorted(live)
    for x, y in itertools.combinations(ids, 2):
        X, Y = sorted(live[x]), sorted(live[y])
        for M in G.labels.values():
            vals = {M.get(i, j) for i in X for j in Y}
            if len(vals) > 1:
                red[x].add(y)
                red[y].add(x)
                break
    return red


def sequence_width(G: AssignmentGraph, seq: ContractionSequence) -> int:
    """Replay the merges from scratch at each step; maximum red degree seen."""
    if seq.n != G.n:
        raise InputError(f"sequence over {seq.n} vertices for a graph on {G.n}")
    seq.validate()
    width = 0
    for _, _, _, live in seq.bags():
        red = _naive_red(G, live)
        width = max(width, max((len(s) for s in red.values()), default=0))
    return width


def greedy_contraction_sequence(G: AssignmentGraph) -> Tuple[ContractionSequence, int]:
    """Merge the pair with the smallest resulting red degree.

    Bags adjacent in the value order are tried first; all pairs are
    considered when the best adjacent merge would raise the width.
    """
    rg = RedGraph(G)
    seq = ContractionSequence(G.n)
    width = 0
    while len(rg.members) > 1:
        order = sorted(rg.members, key=lambda b: min(rg.members[b]))
        cands = list(zip(order, order[1:]))

        def score(p):
            _, deg = rg.preview(*p)
            return (deg, len(rg.members[p[0]]) + len(rg.members[p[1]]), min(rg.members[p[0]]))

        best = min(cands, key=score)
        if score(best)[0] > width:
            best = min(itertools.combinations(order, 2), key=score)
        _, deg = rg.merge(*best)
        seq.merges.append(best)
        width = max(width, deg)
    return seq, width


def random_contraction_sequence(n: int, rng: random.Random) -> ContractionSequence:
    seq = ContractionSequence(n)
    alive = list(range(n))
    nxt = n
    while len(alive) > 1:
        a, b = rng.sample(alive, 2)
        alive.remove(a)
        alive.remove(b)
        alive.append(nxt)
        seq.merges.append((a, b))
        nxt += 1
    return seq


def trivial_contraction_sequence(n: int) -> ContractionSequence:
    """Left-to-right merges along the value order."""
    seq = ContractionSequence(n)
    cur = 0
    for i in range(1, n):
        seq.merges.append((cur, i))
        cur = n + i - 1
    return seq


def exact_min_twinwidth(G: AssignmentGraph, bound: Optional[int] = None) -> Optional[ContractionSequence]:
    """Sequence of width <= bound (the optimum when bound is None), by search over partitions."""
    budget.check("twinwidth", G.n, "exact twin-width vertex count")
    labs = [G.labels[l] for l in G.nontrivial_labels()]

    def red_between(X: frozenset, Y: frozenset) -> bool:
        for M in labs:
            first = None
            for i in X:
                row = M.rows[i]
                for j in Y:
                    v = (row >> j) & 1
                    if first is None:
                        first = v
                    elif v != first:
                        return True
        return False

    red_cache: Dict[Tuple[frozenset, frozenset], bool] = {}

    def red(X, Y):
        key = (X, Y) if min(X) < min(Y) else (Y, X)
        r = red_cache.get(key)
        if r is None:
            r = red_cache[key] = red_between(*key)
        return r

    def degree(parts: Tuple[frozenset, ...]) -> int:
        best = 0
        for X in parts:
            best = max(best, sum(1 for Y in parts if Y is not X and red(X, Y)))
        return best

    def solve(t: int) -> Optional[List[Tuple[frozenset, frozenset]]]:
        dead = set()

        def rec(parts: Tuple[frozenset, ...]):
            if len(parts) == 1:
                return []
            if parts in dead:
                return None
            for X, Y in itertools.combinations(parts, 2):
                merged = tuple(sorted([P for P in parts if P is not X and P is not Y] + [X | Y], key=min))
                if degree(merged) > t:
                    continue
                rest = rec(merged)
                if rest is not None:
                    return [(X, Y)] + rest
            dead.add(parts)
            return None

        return rec(tuple(frozenset([i]) for i in range(G.n)))

    def to_sequence(steps) -> ContractionSequence:
        ids = {frozenset([i]): i for i in range(G.n)}
        seq = ContractionSequence(G.n)
        for step, (X, Y) in enumerate(steps):
            seq.merges.append((ids[X], ids[Y]))
            ids[X | Y] = G.n + step
        return seq

    if G.n == 1:
        return ContractionSequence(1)
    if bound is not None:
        steps = solve(bound)
        return None if steps is None else to_sequence(steps)
    t = 0
    while True:
        steps = solve(t)
        if steps is not None:
            return to_sequence(steps)
        t += 1


# ---------------------------------------------------------------- projected grids

def _check_ordered(tuples: Sequence[Tuple[int, ...]], weak: bool, label: str) -> None:
    if len(tuples) < 1:
        raise InputError(f"{label} is empty")
    width = len(tuples[0])
    for c in range(width):
        col = [t[c] for t in tuples]
        steps = [b - a for a, b in zip(col, col[1:])]
        if not steps:
            continue
        if weak:
            if not (all(s >= 0 for s in steps) or all(s <= 0 for s in steps)):
                raise InputError(f"{label}: coordinate {c} is not monotone")
        else:
            if not (all(s > 0 for s in steps) or all(s < 0 for s in steps) or all(s == 0 for s in steps)):
                raise InputError(f"{label}: coordinate {c} is neither strictly monotone nor constant")


def projected_grid_check(R: Relation, A: Sequence[int], B: Sequence[int], S: Sequence[Sequence[int]],
                         T: Sequence[Sequence[int]], weak: bool = False) -> BitMatrix:
    """Matrix of (s,t) in S x T with s u t in R; S lives on coordinates A, T on B (0-based)."""
    A, B = list(A), list(B)
    if sorted(A + B) != list(range(R.arity)) or not A or not B:
        raise InputError("A and B must partition the coordinates into nonempty parts")
    S = [tuple(s) for s in S]
    T = [tuple(t) for t in T]
    for s in S:
        if len(s) != len(A):
            raise InputError("tuples of S must have |A| entries")
    for t in T:
        if len(t) != len(B):
            raise InputError("tuples of T must have |B| entries")
    _check_ordered(S, weak, "S")
    _check_ordered(T, weak, "T")
    rows = []
    full = [0] * R.arity
    for s in S:
        for c, v in zip(A, s):
            full[c] = v
        row = 0
        for j, t in enumerate(T):
            for c, v in zip(B, t):
                full[c] = v
            if tuple(full) in R:
                row |= 1 << j
        rows.append(row)
    return BitMatrix(len(S), len(T), rows)


def _lines(n: int, width: int, length: int) -> List[List[Tuple[int, ...]]]:
    """Ordered subsets of [n]^width with ``length`` points (strict or constant per coordinate)."""
    per_coord = []
    for _ in range(width):
        opts = [[v] * length for v in range(n)] if length > 1 or width > 1 else []
        for comb in itertools.combinations(range(n), length):
            opts.append(list(comb))
            if length > 1:
                opts.append(list(comb[::-1]))
        per_coord.append(opts)
    out = []
    for choice in itertools.product(*per_coord):
        line = [tuple(c[i] for c in choice) for i in range(length)]
        if len(set(line)) == length:
            out.append(line)
    return out


@dataclass
class ProjectedWitness:
    A: List[int]
    B: List[int]
    S: List[Tuple[int, ...]]
    T: List[Tuple[int, ...]]
    division: Tuple[List[int], List[int]]

    def as_json(self) -> dict:
        return {"A": self.A, "B": self.B, "S": [list(s) for s in self.S], "T": [list(t) for t in self.T],
                "division": {"rows": self.division[0], "cols": self.division[1]}}


@dataclass
class ProjectedSearch:
    lower_bound: int
    witness: Optional[ProjectedWitness]
    complete: bool
    grids_tried: int


def _bipartitions(r: int) -> List[Tuple[List[int], List[int]]]:
    coords = list(range(r))
    out = []
    for size in range(1, r):
        for A in itertools.combinations(coords, size):
            out.append((list(A), [c for c in coords if c not in A]))
    return out


def projected_grid_rank_search(R: Relation, budget_steps: int = 200000, seed: int = 0) -> ProjectedSearch:
    """Lower bound on projected grid-rank with a witness.

    Tiny relations (n <= 6, r <= 3) go through every bipartition and every
    pair of ordered subsets long enough to beat the current bound (a
    k-division of rank k needs k*k rows and columns; shorter subsets only
    lose rank).  Larger relations are sampled.  ``complete`` says whether
    the search ran to the end.
    """
    n, r = R.domain_size, R.arity
    if r < 2:
        raise InputError("projected grid-rank needs arity at least 2")
    rng = random.Random(seed)
    parts = _bipartitions(r)
    best, wit, tried = 0, None, 0

    def consider(A, B, S, T):
        nonlocal best, wit, tried
        tried += 1
        M = projected_grid_check(R, A, B, S, T)
        g = grid_rank(M)
        if g > best:
            best = g
            wit = ProjectedWitness(A, B, S, T, grid_division(M, g))

    if n <= 6 and r <= 3:
        for A, B in parts:
            lines = {}
            for w in {len(A), len(B)}:
                for m in range(1, n + 1):
                    lines[(w, m)] = _lines(n, w, m)
            for ms in range(n, 0, -1):
                for mt in range(n, 0, -1):
                    need = (best + 1) ** 2 if best else 1
                    if ms < need or mt < need:
                        continue
                    for S in lines[(len(A), ms)]:
                        for T in lines[(len(B), mt)]:
                            if tried >= budget_steps:
                                return ProjectedSearch(best, wit, False, tried)
                            consider(A, B, S, T)
        return ProjectedSearch(best, wit, True, tried)
    for _ in range(budget_steps):
        A, B = parts[rng.randrange(len(parts))]
        consider(A, B, _random_line(n, len(A), rng), _random_line(n, len(B), rng))
    return ProjectedSearch(best, wit, False, tried)


def _random_line(n: int, width: int, rng: random.Random) -> List[Tuple[int, ...]]:
    length = rng.randint(1, n)
    while True:
        cols = []
        for _ in range(width):
            kind = rng.random()
            if kind < 0.2:
                cols.append([rng.randrange(n)] * length)
            else:
                vals = sorted(rng.sample(range(n), length))
                cols.append(vals if kind < 0.6 else vals[::-1])
        line = [tuple(c[i] for c in cols) for i in range(length)]
        if len(set(line)) == length:
            return line


__all__ = [
    "BitMatrix", "gf2_rank", "grid_rank", "grid_division", "grid_rank_exhaustive",
    "AssignmentGraph", "assignment_graph", "ContractionSequence", "RedGraph", "sequence_width",
    "greedy_contraction_sequence", "random_contraction_sequence", "trivial_contraction_sequence",
    "exact_min_twinwidth", "projected_grid_check", "projected_grid_rank_search", "ProjectedWitness", "ProjectedSearch",
]
