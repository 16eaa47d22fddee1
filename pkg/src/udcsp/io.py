"""JSON formats for instances, maps, formulas, results and matrices."""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional, Sequence

from .core import Constraint, Instance, Relation, UnaryMap
from .errors import InputError


def map_to_json(m: UnaryMap) -> Dict[str, Any]:
    if m.encoding == "onehot":
        return {"onehot": m.payload}
    if m.encoding == "monotone":
        return {"monotone_thresholds": list(m.payload)}
    if m.encoding == "antimonotone":
        return {"antimonotone_thresholds": list(m.payload)}
    return {"table": list(m.table)}


def map_from_json(obj: Dict[str, Any], n: int, d: int) -> UnaryMap:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InputError(f"map object must have exactly one key, got {obj!r}")
    (key, val), = obj.items()
    if key == "table":
        m = UnaryMap(n, d, "table", val)
    elif key == "onehot":
        m = UnaryMap(n, d, "onehot", val)
    elif key == "monotone_thresholds":
        m = UnaryMap(n, d, "monotone", val)
    elif key == "antimonotone_thresholds":
        m = UnaryMap(n, d, "antimonotone", val)
    else:
        raise InputError(f"unknown map key {key!r}")
    return m


def relation_to_json(R: Relation) -> Dict[str, Any]:
    return {"domain": R.domain_size, "arity": R.arity, "tuples": [list(t) for t in R.tuples]}


def relation_from_json(name: str, obj: Dict[str, Any]) -> Relation:
    try:
        return Relation(name, int(obj["domain"]), int(obj["arity"]), obj["tuples"])
    except KeyError as exc:
        raise InputError(f"relation {name!r} lacks field {exc}") from exc


def relations_from_json(obj: Dict[str, Any]) -> Dict[str, Relation]:
    return {name: relation_from_json(name, r) for name, r in obj.items()}


def instance_to_json(inst: Instance, provenance: Optional[dict] = None) -> Dict[str, Any]:
    rels: Dict[str, Relation] = {}
    for c in inst.constraints:
        rels.setdefault(c.relation.name, c.relation)
    out: Dict[str, Any] = {
        "domain_size": inst.domain_size,
        "variables": list(inst.variables),
        "relations": {name: relation_to_json(R) for name, R in rels.items()},
        "constraints": [
            {"rel": c.relation.name, "vars": [inst.variables[v] for v in c.vars],
             "maps": [map_to_json(m) for m in c.maps]}
            for c in inst.constraints
        ],
    }
    if inst.weights is not None:
        out["weights"] = {v: list(w) for v, w in zip(inst.variables, inst.weights)}
    if provenance is not None:
        out["provenance"] = provenance
    return out


def instance_from_json(obj: Dict[str, Any]) -> Instance:
    try:
        n = int(obj["domain_size"])
        names = [str(v) for v in obj["variables"]]
        rels = relations_from_json(obj.get("relations", {}))
        index = {v: i for i, v in enumerate(names)}
        cons = []
        for c in obj.get("constraints", []):
            R = rels.get(c["rel"])
            if R is None:
                raise InputError(f"constraint uses undeclared relation {c['rel']!r}")
            vs = []
            for v in c["vars"]:
                if v not in index:
                    raise InputError(f"constraint uses undeclared variable {v!r}")
                vs.append(index[v])
            maps = [map_from_json(m, n, R.domain_size) for m in c["maps"]]
            cons.append(Constraint(R, tuple(vs), tuple(maps)))
        weights = None
        if "weights" in obj:
            w = obj["weights"]
            weights = tuple(tuple(w.get(v, [0] * n)) for v in names)
    except KeyError as exc:
        raise InputError(f"instance lacks field {exc}") from exc
    except TypeError as exc:
        raise InputError(f"malformed instance: {exc}") from exc
    return Instance(n, tuple(names), tuple(cons), weights)


def load_instance(path: str) -> Instance:
    with open(path) as fh:
        try:
            return instance_from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: {exc}") from exc


def dump_instance(inst: Instance, path: str, provenance: Optional[dict] = None) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_json(inst, provenance), fh, indent=1)


def read_matrix(text: str) -> List[List[int]]:
    """0/1 rows, one per line; spaces and commas are ignored."""
    rows = []
    for line in text.splitlines():
        line = line.strip().replace(" ", "").replace(",", "")
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise InputError(f"matrix row {line!r} is not 0/1")
        rows.append([int(ch) for ch in line])
    if not rows or len({len(r) for r in rows}) != 1:
        raise InputError("matrix rows must be nonempty and of equal length")
    return rows


def write_matrix(rows: Sequence[Sequence[int]]) -> str:
    return "\n".join("".join(str(int(v)) for v in r) for r in rows) + "\n"


__all__ = [
    "map_to_json", "map_from_json", "relation_to_json", "relation_from_json", "relations_from_json",
    "instance_to_json", "instance_from_json", "load_instance", "dump_instance", "read_matrix", "write_matrix",
]
