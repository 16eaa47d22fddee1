"""Relations, guarding maps, languages and instances.

Everything here is immutable once built.  Other modules treat these
objects as the semantic ground truth.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import InputError

Tuple_ = Tuple[int, ...]

MAX_PACKED_BITS = 24


def _bits_per_value(d: int) -> int:
    return max(1, (d - 1).bit_length())


class Relation:
    """Finite relation over [d] = {0..d-1} of fixed arity.

    Tuples are kept sorted for iteration and as a frozenset plus an
    integer bitset (indexed by the mixed-radix code of a tuple) for
    membership and fast equality.
    """

    __slots__ = ("name", "domain_size", "arity", "tuples", "_set", "bits")

    def __init__(self, name: str, domain_size: int, arity: int, tuples: Iterable[Sequence[int]]):
        if domain_size < 1:
            raise InputError(f"relation {name}: domain size must be positive")
        if arity < 1:
            raise InputError(f"relation {name}: arity must be at least 1")
        if arity * _bits_per_value(domain_size) > MAX_PACKED_BITS:
            raise InputError(f"relation {name}: {arity}x{domain_size} exceeds the packing budget")
        ts = set()
        for t in tuples:
            t = tuple(int(v) for v in t)
            if len(t) != arity:
                raise InputError(f"relation {name}: tuple {t} has wrong length")
            for v in t:
                if not 0 <= v < domain_size:
                    raise InputError(f"relation {name}: value {v} outside [0,{domain_size - 1}]")
            ts.add(t)
        self.name = name
        self.domain_size = domain_size
        self.arity = arity
        self.tuples: Tuple[Tuple_, ...] = tuple(sorted(ts))
        self._set = frozenset(ts)
        bits = 0
        for t in ts:
            bits |= 1 << self.code(t)
        self.bits = bits

    # mixed radix code, first coordinate most significant
    def code(self, t: Sequence[int]) -> int:
        c = 0
        d = self.domain_size
        for v in t:
            c = c * d + v
        return c

    def __contains__(self, t) -> bool:
        return tuple(t) in self._set

    def __iter__(self) -> Iterator[Tuple_]:
        return iter(self.tuples)

    def __len__(self) -> int:
        return len(self.tuples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return (self.domain_size, self.arity, self.bits) == (other.domain_size, other.arity, other.bits)

    def __hash__(self) -> int:
        return hash((self.domain_size, self.arity, self.bits))

    def __repr__(self) -> str:
        return f"Relation({self.name!r}, d={self.domain_size}, r={self.arity}, |R|={len(self.tuples)})"

    def same_tuples(self, other: "Relation") -> bool:
        return self == other

    def renamed(self, name: str) -> "Relation":
        return Relation(name, self.domain_size, self.arity, self.tuples)

    def is_full(self) -> bool:
        return len(self.tuples) == self.domain_size ** self.arity

    @classmethod
    def from_predicate(cls, name: str, d: int, r: int, pred) -> "Relation":
        return cls(name, d, r, (t for t in itertools.product(range(d), repeat=r) if pred(t)))

    @classmethod
    def full(cls, d: int, r: int, name: str = "Full") -> "Relation":
        return cls(name, d, r, itertools.product(range(d), repeat=r))


class MapFamilyKind(enum.Enum):
    ALL = "all"
    ID = "id"
    ONEHOT = "onehot"
    MONOTONE = "mo"
    ANTIMONOTONE = "anti"
    MONOTONE_AND_ANTI = "mo-anti"


def _weakly_increasing(seq: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(seq, seq[1:]))


def _weakly_decreasing(seq: Sequence[int]) -> bool:
    return all(a >= b for a, b in zip(seq, seq[1:]))


def thresholds_from_table(table: Sequence[int], d: int) -> List[int]:
    """Thresholds t_i = least x with table[x] >= i (or len(table)) for a weakly increasing table."""
    n = len(table)
    out = []
    for i in range(1, d):
        out.append(next((x for x in range(n) if table[x] >= i), n))
    return out


class UnaryMap:
    """Map [n] -> [d] in one of four encodings; the induced table is cached."""

    __slots__ = ("source_size", "target_size", "encoding", "payload", "table")

    def __init__(self, source_size: int, target_size: int, encoding: str, payload):
        n, d = source_size, target_size
        if n < 1 or d < 1:
            raise InputError("map sizes must be positive")
        if encoding == "table":
            table = tuple(int(v) for v in payload)
            if len(table) != n:
                raise InputError(f"table has length {len(table)}, expected {n}")
            if any(not 0 <= v < d for v in table):
                raise InputError("table value out of range")
            payload = table
        elif encoding == "onehot":
            if d != 2:
                raise InputError("one-hot maps target [2]")
            hot = int(payload)
            if not 0 <= hot < n:
                raise InputError(f"hot point {hot} outside [0,{n - 1}]")
            payload = hot
            table = tuple(1 if x == hot else 0 for x in range(n))
        elif encoding in ("monotone", "antimonotone"):
            ts = tuple(int(t) for t in payload)
            if len(ts) != d - 1:
                raise InputError(f"need {d - 1} thresholds, got {len(ts)}")
            if not _weakly_increasing(ts) or any(not 0 <= t <= n for t in ts):
                raise InputError(f"thresholds {list(ts)} must be weakly increasing in [0,{n}]")
            payload = ts
            up = tuple(sum(1 for t in ts if x >= t) for x in range(n))
            table = up if encoding == "monotone" else tuple(d - 1 - v for v in up)
        else:
            raise InputError(f"unknown map encoding {encoding!r}")
        self.source_size = n
        self.target_size = d
        self.encoding = encoding
        self.payload = payload
        self.table: Tuple_ = table

    @classmethod
    def from_table(cls, values: Sequence[int], d: int) -> "UnaryMap":
        return cls(len(values), d, "table", values)

    @classmethod
    def onehot(cls, n: int, hot: int) -> "UnaryMap":
        return cls(n, 2, "onehot", hot)

    @classmethod
    def monotone(cls, n: int, thresholds: Sequence[int]) -> "UnaryMap":
        return cls(n, len(thresholds) + 1, "monotone", thresholds)

    @classmethod
    def antimonotone(cls, n: int, thresholds: Sequence[int]) -> "UnaryMap":
        return cls(n, len(thresholds) + 1, "antimonotone", thresholds)

    @classmethod
    def identity(cls, n: int) -> "UnaryMap":
        return cls(n, n, "table", range(n))

    @classmethod
    def geq(cls, n: int, a: int) -> "UnaryMap":
        """Iverson bracket [x >= a]."""
        return cls.monotone(n, [a])

    @classmethod
    def leq(cls, n: int, a: int) -> "UnaryMap":
        """Iverson bracket [x <= a]."""
        return cls.antimonotone(n, [a + 1])

    @classmethod
    def canonical(cls, table: Sequence[int], d: int) -> "UnaryMap":
        """Pick the most specific encoding for a table."""
        table = tuple(table)
        n = len(table)
        if _weakly_increasing(table):
            return cls(n, d, "monotone", thresholds_from_table(table, d))
        if _weakly_decreasing(table):
            return cls(n, d, "antimonotone", thresholds_from_table([d - 1 - v for v in table], d))
        return cls(n, d, "table", table)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def is_monotone(self) -> bool:
        return _weakly_increasing(self.table)

    def is_antimonotone(self) -> bool:
        return _weakly_decreasing(self.table)

    def is_onehot(self) -> bool:
        return self.target_size == 2 and sum(self.table) == 1

    def is_identity(self) -> bool:
        return self.source_size == self.target_size and self.table == tuple(range(self.source_size))

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnaryMap):
            return NotImplemented
        return (self.target_size, self.table) == (other.target_size, other.table)

    def __hash__(self) -> int:
        return hash((self.target_size, self.table))

    def __repr__(self) -> str:
        return f"UnaryMap({self.source_size}->{self.target_size}, {self.encoding}, {self.payload!r})"


def map_apply(m: UnaryMap, x: int) -> int:
    if not 0 <= x < m.source_size:
        raise InputError(f"value {x} outside [0,{m.source_size - 1}]")
    return m.table[x]


def map_compose(outer: UnaryMap, inner: UnaryMap) -> UnaryMap:
    """outer after inner."""
    if outer.source_size != inner.target_size:
        raise InputError(f"cannot compose {outer.source_size}-domain map after a map into [{inner.target_size}]")
    return UnaryMap.canonical([outer.table[v] for v in inner.table], outer.target_size)


def reversal_map(n: int) -> UnaryMap:
    return UnaryMap.from_table(range(n - 1, -1, -1), n)


def family_contains(family: MapFamilyKind, m: UnaryMap) -> bool:
    if family is MapFamilyKind.ALL:
        return True
    if family is MapFamilyKind.ID:
        return m.is_identity()
    if family is MapFamilyKind.ONEHOT:
        return m.is_onehot()
    if family is MapFamilyKind.MONOTONE:
        return m.is_monotone()
    if family is MapFamilyKind.ANTIMONOTONE:
        return m.is_antimonotone()
    return m.is_monotone() or m.is_antimonotone()


def count_family_tables(n: int, d: int, family: MapFamilyKind) -> int:
    from math import comb
    if family is MapFamilyKind.ALL:
        return d ** n
    if family is MapFamilyKind.ID:
        return 1 if n == d else 0
    if family is MapFamilyKind.ONEHOT:
        return n if d == 2 else 0
    mono = comb(n + d - 1, n)
    if family is MapFamilyKind.MONOTONE_AND_ANTI:
        return 2 * mono - d if n > 1 else d
    return mono


def enumerate_tables(n: int, d: int, family: MapFamilyKind) -> Iterator[Tuple_]:
    """Induced tables of the maps [n] -> [d] in a family, each exactly once."""
    if family is MapFamilyKind.ALL:
        from . import budget
        budget.check("maps", float(d) ** n, f"all maps [{n}]->[{d}]")
        yield from itertools.product(range(d), repeat=n)
    elif family is MapFamilyKind.ID:
        if n == d:
            yield tuple(range(n))
    elif family is MapFamilyKind.ONEHOT:
        if d == 2:
            for hot in range(n):
                yield tuple(1 if x == hot else 0 for x in range(n))
    elif family is MapFamilyKind.MONOTONE:
        yield from itertools.combinations_with_replacement(range(d), n)
    elif family is MapFamilyKind.ANTIMONOTONE:
        for t in itertools.combinations_with_replacement(range(d), n):
            yield t[::-1]
    else:
        ups = list(itertools.combinations_with_replacement(range(d), n))
        yield from ups
        for t in ups:
            if t[0] != t[-1]:
                yield t[::-1]


class ConstraintLanguage:
    """Finite set of uniquely named relations."""

    __slots__ = ("relations",)

    def __init__(self, relations: Iterable[Relation] = ()):
        rels: Dict[str, Relation] = {}
        for r in relations:
            if r.name in rels:
                raise InputError(f"duplicate relation name {r.name!r}")
            rels[r.name] = r
        self.relations: Mapping[str, Relation] = rels

    def __iter__(self) -> Iterator[Relation]:
        return iter(self.relations.values())

    def __len__(self) -> int:
        return len(self.relations)

    def __getitem__(self, name: str) -> Relation:
        return self.relations[name]

    def __contains__(self, item) -> bool:
        if isinstance(item, Relation):
            return any(r == item for r in self.relations.values())
        return item in self.relations

    def is_boolean(self) -> bool:
        return all(r.domain_size == 2 for r in self)

    def __repr__(self) -> str:
        return f"ConstraintLanguage({sorted(self.relations)})"


@dataclass(frozen=True)
class Constraint:
    relation: Relation
    vars: Tuple[int, ...]
    maps: Tuple[UnaryMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "maps", tuple(self.maps))
        r = self.relation.arity
        if len(self.vars) != r or len(self.maps) != r:
            raise InputError(f"constraint on {self.relation.name} needs {r} vars and maps")
        for m in self.maps:
            if m.target_size != self.relation.domain_size:
                raise InputError(f"map into [{m.target_size}] used with relation over [{self.relation.domain_size}]")

    def scope(self) -> Tuple[int, ...]:
        """Distinct variables in first-occurrence order."""
        return tuple(dict.fromkeys(self.vars))

    def image(self, a: Sequence[int]) -> Tuple_:
        return tuple(m.table[a[v]] for v, m in zip(self.vars, self.maps))


@dataclass(frozen=True)
class Instance:
    domain_size: int
    variables: Tuple[str, ...]
    constraints: Tuple[Constraint, ...] = ()
    weights: Optional[Tuple[Tuple[int, ...], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        n, k = self.domain_size, len(self.variables)
        if n < 1:
            raise InputError("domain size must be at least 1")
        if len(set(self.variables)) != k:
            raise InputError("variable names must be unique")
        for c in self.constraints:
            for v in c.vars:
                if not 0 <= v < k:
                    raise InputError(f"constraint references unknown variable {v}")
            for m in c.maps:
                if m.source_size != n:
                    raise InputError(f"map from [{m.source_size}] in an instance over [{n}]")
        if self.weights is not None:
            w = tuple(tuple(int(x) for x in row) for row in self.weights)
            if len(w) != k or any(len(row) != n or min(row, default=0) < 0 for row in w):
                raise InputError("weights need one nonnegative row of length n per variable")
            object.__setattr__(self, "weights", w)

    @property
    def k(self) -> int:
        return len(self.variables)

    def relations(self) -> ConstraintLanguage:
        seen: Dict[str, Relation] = {}
        for c in self.constraints:
            prev = seen.get(c.relation.name)
            if prev is None:
                seen[c.relation.name] = c.relation
            elif prev != c.relation:
                raise InputError(f"two different relations named {c.relation.name!r}")
        return ConstraintLanguage(seen.values())

    def with_constraints(self, constraints: Iterable[Constraint]) -> "Instance":
        return Instance(self.domain_size, self.variables, tuple(constraints), self.weights)

    def weight(self, a: Sequence[int]) -> int:
        if self.weights is None:
            return 0
        return sum(self.weights[v][x] for v, x in enumerate(a))


Assignment = Tuple[int, ...]


def constraint_satisfied(c: Constraint, a: Sequence[int]) -> bool:
    return c.image(a) in c.relation


def instance_eval(inst: Instance, a: Sequence[int]) -> bool:
    if len(a) != inst.k:
        raise InputError(f"assignment has {len(a)} values for {inst.k} variables")
    for x in a:
        if x is None or not 0 <= x < inst.domain_size:
            raise InputError(f"value {x!r} outside the domain")
    return all(constraint_satisfied(c, a) for c in inst.constraints)


RestrictResult = Union[Relation, bool]


def restrict_relation(R: Relation, i: int, b: int) -> RestrictResult:
    """Fix coordinate i (1-based) to b and project it away.

    A unary relation restricts to a truth value.
    """
    if not 1 <= i <= R.arity:
        raise InputError(f"coordinate {i} outside [1,{R.arity}]")
    if not 0 <= b < R.domain_size:
        raise InputError(f"value {b} outside the domain")
    if R.arity == 1:
        return (b,) in R
    j = i - 1
    kept = [t[:j] + t[j + 1:] for t in R if t[j] == b]
    return Relation(f"{R.name}|{i}={b}", R.domain_size, R.arity - 1, kept)


def relation_projection(R: Relation, coords: Sequence[int]) -> Relation:
    """Project onto 0-based coordinates (in the given order)."""
    for c in coords:
        if not 0 <= c < R.arity:
            raise InputError(f"coordinate {c} outside the relation")
    return Relation(f"pi{tuple(coords)}({R.name})", R.domain_size, len(coords),
                    (tuple(t[c] for c in coords) for t in R))


def relation_is_0valid(R: Relation) -> bool:
    return (0,) * R.arity in R


@dataclass
class StarLanguage:
    """The restriction closure of a Boolean language.

    ``constants`` records the arity-0 truth values that appear.
    """

    language: ConstraintLanguage
    constants: frozenset = field(default_factory=frozenset)


def language_star(gamma: Iterable[Relation]) -> StarLanguage:
    rels: List[Relation] = []
    consts = set()
    pending = list(gamma)
    while pending:
        R = pending.pop()
        if R.domain_size != 2:
            raise InputError("the restriction closure is defined for Boolean languages")
        if any(R == S for S in rels):
            continue
        rels.append(R)
        for i in range(1, R.arity + 1):
            for b in (0, 1):
                S = restrict_relation(R, i, b)
                if isinstance(S, bool):
                    consts.add(S)
                else:
                    pending.append(S)
    # unique names, first come first served
    named: Dict[str, Relation] = {}
    for R in rels:
        name = R.name
        while name in named:
            name += "'"
        named[name] = R if name == R.name else R.renamed(name)
    return StarLanguage(ConstraintLanguage(named.values()), frozenset(consts))


def or_relation(m: int) -> Relation:
    return Relation.from_predicate(f"Or{m}", 2, m, lambda t: any(t))


def nand_relation(m: int) -> Relation:
    return Relation.from_predicate(f"Nand{m}", 2, m, lambda t: not all(t))


def even_relation(m: int) -> Relation:
    return Relation.from_predicate(f"Even{m}", 2, m, lambda t: sum(t) % 2 == 0)


def _rel(name: str, d: int, rows: Iterable[str]) -> Relation:
    tuples = [tuple(int(ch) for ch in s) for s in rows]
    return Relation(name, d, len(tuples[0]), tuples)


def builtin_relations() -> ConstraintLanguage:
    rels = [
        _rel("Eq", 2, ["00", "11"]),
        _rel("Impl", 2, ["00", "01", "11"]),
        _rel("R3", 3, ["00", "02", "11", "20", "22"]),
        _rel("Ra", 3, ["00", "02", "11", "22"]),
        _rel("Rb", 3, ["02", "11", "20", "22"]),
        _rel("Rc", 3, ["00", "02", "11", "20"]),
        _rel("RD", 3, ["01", "10", "12", "21"]),
        _rel("R1in3", 2, ["100", "010", "001"]),
        _rel("NAE", 2, ["001", "010", "011", "100", "101", "110"]),
        _rel("Zero", 2, ["0"]),
        _rel("One", 2, ["1"]),
    ]
    for m in (1, 2, 3):
        rels.append(or_relation(m))
        rels.append(nand_relation(m))
    for m in (1, 2, 3, 4):
        rels.append(even_relation(m))
    return ConstraintLanguage(rels)


def builtin(name: str) -> Relation:
    return builtin_relations()[name]


__all__ = [
    "Relation", "UnaryMap", "MapFamilyKind", "ConstraintLanguage", "Constraint", "Instance",
    "Assignment", "StarLanguage", "map_apply", "map_compose", "reversal_map", "family_contains",
    "thresholds_from_table", "enumerate_tables", "count_family_tables", "constraint_satisfied", "instance_eval", "restrict_relation",
    "relation_projection", "relation_is_0valid", "language_star", "builtin_relations", "builtin",
    "or_relation", "nand_relation", "even_relation",
]
