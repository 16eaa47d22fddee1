"""Solver results."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ..core import Instance, instance_eval
from ..errors import InternalError


@dataclass
class SolveResult:
    status: str  # "sat" or "unsat"
    assignment: Optional[Tuple[int, ...]] = None
    solver: str = ""
    stats: Dict[str, Any] = field(default_factory=dict)
    trace: List[str] = field(default_factory=list)
    weight: Optional[int] = None

    @property
    def sat(self) -> bool:
        return self.status == "sat"

    def verify(self, inst: Instance) -> "SolveResult":
        if self.sat and not instance_eval(inst, self.assignment):
            raise InternalError(f"{self.solver} returned a non-solution {self.assignment}")
        return self

    def to_json(self, inst: Instance) -> Dict[str, Any]:
        out: Dict[str, Any] = {"status": self.status, "solver": self.solver, "stats": self.stats}
        out["assignment"] = ({v: int(x) for v, x in zip(inst.variables, self.assignment)}
                             if self.assignment is not None else None)
        if self.trace:
            out["trace"] = self.trace
        if self.weight is not None:
            out["weight"] = self.weight
        return out


def sat(assignment, solver: str, **stats) -> SolveResult:
    return SolveResult("sat", tuple(int(x) for x in assignment), solver, dict(stats))


def unsat(solver: str, **stats) -> SolveResult:
    return SolveResult("unsat", None, solver, dict(stats))
