"""Seeded random instances inside each solver's scope."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import List

from .core import Constraint, Instance, Relation, UnaryMap, builtin_relations, relation_is_0valid
from .definability import or2_definable
from .errors import InputError
from .patterns import check_connector, check_median, check_min, check_weak_separability

SCOPES = ("minmax", "median", "2sat", "fpt", "twinwidth", "connector")


def _random_relation(rng: random.Random, d: int, r: int, name: str) -> Relation:
    tuples = [t for t in itertools.product(range(d), repeat=r) if rng.random() < 0.5]
    return Relation(name, d, r, tuples)


@lru_cache(maxsize=None)
def relation_pool(scope: str) -> tuple:
    """Built-in relations with the property plus a fixed batch of random ones."""
    tests = {
        "minmax": lambda R: check_min([R]),
        "median": lambda R: check_median([R]),
        "2sat": lambda R: R.domain_size == 2 and or2_definable(R) is not None,
        "fpt": lambda R: R.domain_size == 2 and check_weak_separability(R),
        "twinwidth": lambda R: True,
        "connector": lambda R: R.arity == 2 and check_connector([R]),
    }
    if scope not in tests:
        raise InputError(f"unknown scope {scope!r}; pick one of {', '.join(SCOPES)}")
    ok = tests[scope]
    pool = [R for R in builtin_relations() if R.arity <= 3 and ok(R)]
    rng = random.Random(f"pool-{scope}")
    shapes = [(2, 2), (2, 3), (3, 2)] if scope not in ("2sat", "fpt") else [(2, 2), (2, 3)]
    if scope == "connector":
        shapes = [(2, 2), (3, 2)]
    tries = 0
    while len(pool) < 24 and tries < 4000:
        tries += 1
        d, r = rng.choice(shapes)
        R = _random_relation(rng, d, r, f"rnd{scope}{tries}")
        if len(R) and ok(R):
            pool.append(R)
    return tuple(pool)


def random_monotone(rng: random.Random, n: int, d: int) -> UnaryMap:
    return UnaryMap.monotone(n, sorted(rng.randint(0, n) for _ in range(d - 1)))


def random_map(rng: random.Random, n: int, d: int, scope: str) -> UnaryMap:
    if scope in ("minmax", "median"):
        return random_monotone(rng, n, d)
    if scope in ("2sat", "fpt"):
        return UnaryMap.onehot(n, rng.randrange(n))
    if scope == "connector":
        m = random_monotone(rng, n, d)
        if rng.random() < 0.5:
            return UnaryMap.antimonotone(n, m.payload)
        return m
    return UnaryMap.from_table([rng.randrange(d) for _ in range(n)], d)


def random_instance(rng: random.Random, scope: str, n_max: int = 8, k_max: int = 4, m_max: int = 12,
                    n_min: int = 1) -> Instance:
    pool = relation_pool(scope)
    n = rng.randint(n_min, n_max)
    k = rng.randint(1, k_max)
    cons = []
    for _ in range(rng.randint(0, m_max)):
        R = rng.choice(pool)
        if scope in ("twinwidth", "connector"):
            pair = rng.sample(range(k), 2) if k > 1 else [0]
            vs = tuple(rng.choice(pair) for _ in range(R.arity))
        else:
            vs = tuple(rng.randrange(k) for _ in range(R.arity))
        ms = tuple(random_map(rng, n, R.domain_size, scope) for _ in vs)
        cons.append(Constraint(R, vs, ms))
    return Instance(n, tuple(f"v{i}" for i in range(k)), tuple(cons))


def random_zero_valid_onehot(rng: random.Random, n_max: int = 6, k_max: int = 3, m_max: int = 5) -> Instance:
    pool = [R for R in relation_pool("fpt") if relation_is_0valid(R)]
    n, k = rng.randint(1, n_max), rng.randint(1, k_max)
    cons = []
    for _ in range(rng.randint(0, m_max)):
        R = rng.choice(pool)
        cons.append(Constraint(R, tuple(rng.randrange(k) for _ in range(R.arity)),
                               tuple(UnaryMap.onehot(n, rng.randrange(n)) for _ in range(R.arity))))
    return Instance(n, tuple(f"v{i}" for i in range(k)), tuple(cons))


def random_permutation(rng: random.Random, n: int) -> List[int]:
    p = list(range(n))
    rng.shuffle(p)
    return p


def ra_projection_instance(rng: random.Random, n_max: int = 12, m_max: int = 6) -> Instance:
    """Three variables under Ra and monotone maps, every constraint binary."""
    from .core import builtin

    Ra = builtin("Ra")
    n = rng.randint(2, n_max)
    cons = []
    for _ in range(rng.randint(1, m_max)):
        v, w = rng.sample(range(3), 2)
        cons.append(Constraint(Ra, (v, w), (random_monotone(rng, n, 3), random_monotone(rng, n, 3))))
    return Instance(n, ("x", "y", "z"), tuple(cons))


__all__ = ["SCOPES", "relation_pool", "random_instance", "random_map", "random_monotone",
           "random_zero_valid_onehot", "random_permutation", "ra_projection_instance"]

