"""Solvers; each raises PreconditionError when its guarantee does not apply."""

from __future__ import annotations

from .auto import solve_auto
from .binarize import binarize_constraint, binarize_instance
from .bruteforce import (all_solutions, count_solutions, satisfying_array, solution_projection, solve_bruteforce,
                         solve_bruteforce_weighted)
from .consistency import solve_minmax, solve_sac_median
from .onehot import (bottom, enumerate_minimal_assignments, eval_with_bottom, solve_onehot_2sat, solve_onehot_fpt)
from .result import SolveResult
from .twinwidth import solve_twinwidth_dp, solve_twinwidth_dp_weighted

SOLVERS = {
    "auto": solve_auto,
    "oracle": solve_bruteforce,
    "minmax": lambda inst: solve_minmax(inst, "min"),
    "minmax-max": lambda inst: solve_minmax(inst, "max"),
    "median": solve_sac_median,
    "onehot2sat": solve_onehot_2sat,
    "onehotfpt": solve_onehot_fpt,
    "twinwidth": solve_twinwidth_dp,
}

__all__ = [
    "SolveResult", "SOLVERS", "solve_auto", "solve_bruteforce", "solve_bruteforce_weighted", "count_solutions",
    "all_solutions", "satisfying_array", "solution_projection", "solve_minmax", "solve_sac_median",
    "solve_onehot_2sat", "solve_onehot_fpt", "enumerate_minimal_assignments", "bottom", "eval_with_bottom",
    "solve_twinwidth_dp", "solve_twinwidth_dp_weighted", "binarize_instance", "binarize_constraint",
]
