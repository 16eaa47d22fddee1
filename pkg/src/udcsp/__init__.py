"""Workbench for constraint satisfaction with few variables over large ordered domains."""

from __future__ import annotations

from .core import (
    Constraint,
    ConstraintLanguage,
    Instance,
    MapFamilyKind,
    Relation,
    UnaryMap,
    builtin,
    builtin_relations,
    constraint_satisfied,
    instance_eval,
)
from .errors import BudgetError, InputError, InternalError, PreconditionError, UdcspError

__version__ = "0.1.0"

__all__ = [
    "Constraint", "ConstraintLanguage", "Instance", "MapFamilyKind", "Relation", "UnaryMap", "builtin",
    "builtin_relations", "constraint_satisfied", "instance_eval", "BudgetError", "InputError", "InternalError",
    "PreconditionError", "UdcspError", "__version__",
]
