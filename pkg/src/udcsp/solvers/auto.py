"""Route an instance to the cheapest solver whose precondition holds."""

from __future__ import annotations

from .. import budget
from ..core import Instance
from ..errors import BudgetError, PreconditionError
from ..patterns import check_connector
from .binarize import binarize_instance
from .bruteforce import solve_bruteforce, solve_bruteforce_weighted
from .consistency import solve_minmax, solve_sac_median
from .onehot import solve_onehot_2sat, solve_onehot_fpt
from .result import SolveResult
from .twinwidth import solve_twinwidth_dp, solve_twinwidth_dp_weighted


def _binary(inst: Instance) -> bool:
    return all(len(c.scope()) <= 2 for c in inst.constraints)


def _within_bruteforce(inst: Instance) -> bool:
    return float(inst.domain_size) ** inst.k <= budget.get("bruteforce")


def solve_auto(inst: Instance) -> SolveResult:
    trace = []
    if inst.weights is not None:
        if _binary(inst):
            res = solve_twinwidth_dp_weighted(binarize_instance(inst))
        elif _within_bruteforce(inst):
            res = solve_bruteforce_weighted(inst)
        else:
            raise BudgetError("weighted instance is neither binary nor small enough to enumerate")
        res.trace = [f"weighted: {res.solver}"]
        return res
    attempts = [
        ("minmax-min", lambda: solve_minmax(inst, "min")),
        ("minmax-max", lambda: solve_minmax(inst, "max")),
        ("median", lambda: solve_sac_median(inst)),
        ("onehot2sat", lambda: solve_onehot_2sat(inst)),
        ("onehotfpt", lambda: solve_onehot_fpt(inst)),
    ]
    for name, run in attempts:
        try:
            res = run()
        except PreconditionError as exc:
            trace.append(f"{name}: skipped ({exc})")
            continue
        trace.append(f"{name}: used")
        res.trace = trace
        return res
    binary = _binary(inst)
    connector = binary and check_connector(list(inst.relations()))
    if connector:
        trace.append("twinwidth: used (connector-preserved language)")
        res = solve_twinwidth_dp(binarize_instance(inst))
    elif _within_bruteforce(inst):
        trace.append("oracle: used")
        res = solve_bruteforce(inst)
    elif binary:
        trace.append("twinwidth: used (exact, no width guarantee)")
        res = solve_twinwidth_dp(binarize_instance(inst))
    else:
        raise BudgetError(f"no solver applies and {inst.domain_size}^{inst.k} exceeds the brute-force budget")
    res.trace = trace
    return res
