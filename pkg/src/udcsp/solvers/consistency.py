"""Polynomial solvers driven by local consistency."""

from __future__ import annotations

import time

from ..core import Instance
from ..errors import InputError, InternalError, PreconditionError
from ..patterns import check_max, check_median, check_min
from ..propagation import arc_consistency, prepare, singleton_arc_consistency
from .result import SolveResult, sat, unsat


def _require_monotone(inst: Instance, what: str) -> None:
    for c in inst.constraints:
        for m in c.maps:
            if not m.is_monotone():
                raise PreconditionError(f"{what} needs monotone maps; found {m.table}")


def solve_minmax(inst: Instance, direction: str = "min") -> SolveResult:
    """Arc consistency, then each variable takes its least (or greatest) survivor.

    Correct when every relation is min-closed (max-closed) and every map is
    monotone, since monotone maps commute with min and max.
    """
    if direction not in ("min", "max"):
        raise InputError("direction must be 'min' or 'max'")
    gamma = list(inst.relations())
    if not (check_min(gamma) if direction == "min" else check_max(gamma)):
        raise PreconditionError(f"language is not {direction}-closed")
    _require_monotone(inst, "solve_minmax")
    t0 = time.perf_counter()
    dom = arc_consistency(inst)
    name = f"minmax-{direction}"
    if dom.is_empty():
        return unsat(name, seconds=time.perf_counter() - t0)
    if direction == "min":
        a = [(b & -b).bit_length() - 1 for b in dom]
    else:
        a = [b.bit_length() - 1 for b in dom]
    return sat(a, name, seconds=time.perf_counter() - t0).verify(inst)


def solve_sac_median(inst: Instance) -> SolveResult:
    """Singleton arc consistency for median-closed languages with monotone maps.

    A solution is read off without backtracking: fix the first variable to
    its least surviving value, re-run consistency, and continue.
    """
    gamma = list(inst.relations())
    if not check_median(gamma):
        raise PreconditionError("language is not median-closed")
    _require_monotone(inst, "solve_sac_median")
    t0 = time.perf_counter()
    prep = prepare(inst)
    dom = list(singleton_arc_consistency(inst, None, prep))
    rounds = 1
    if any(b == 0 for b in dom):
        return unsat("median", seconds=time.perf_counter() - t0, sac_rounds=rounds)
    for v in range(inst.k):
        low = dom[v] & -dom[v]
        dom[v] = low
        dom = list(singleton_arc_consistency(inst, dom, prep))
        rounds += 1
        if any(b == 0 for b in dom):
            raise InternalError(f"consistency emptied after fixing variable {inst.variables[v]}")
    a = [b.bit_length() - 1 for b in dom]
    return sat(a, "median", seconds=time.perf_counter() - t0, sac_rounds=rounds).verify(inst)
