"""Enumeration budgets.

Defaults can be overridden with ``UDCSP_BUDGET``, either a single number
(scales every budget) or comma separated ``key=value`` pairs, e.g.
``UDCSP_BUDGET="bruteforce=1e8,grid=128"``.
"""

from __future__ import annotations

import os
from typing import Dict

from .errors import BudgetError, InputError

DEFAULTS: Dict[str, float] = {
    "bruteforce": 1e7,   # n^k assignments
    "maps": 1e6,         # d^p maps for the All family
    "grid": 64,          # rows/cols for exact grid-rank
    "twinwidth": 10,     # vertices for exact contraction search
    "atoms": 2e6,        # candidate atoms in canonical formulas
}


def _parse(raw: str) -> Dict[str, float]:
    raw = raw.strip()
    if not raw:
        return {}
    if "=" not in raw:
        try:
            scale = float(raw)
        except ValueError as exc:
            raise InputError(f"bad UDCSP_BUDGET value {raw!r}") from exc
        return {k: v * scale for k, v in DEFAULTS.items()}
    out = {}
    for part in raw.split(","):
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in DEFAULTS:
            raise InputError(f"unknown budget {key!r}")
        out[key] = float(val)
    return out


def get(key: str) -> float:
    return _parse(os.environ.get("UDCSP_BUDGET", "")).get(key, DEFAULTS[key])


def check(key: str, amount: float, what: str = "") -> None:
    limit = get(key)
    if amount > limit:
        raise BudgetError(f"{what or key}: {amount:g} exceeds budget {limit:g}")
