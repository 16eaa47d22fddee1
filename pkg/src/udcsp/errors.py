"""Exception types shared across the package."""

from __future__ import annotations


class UdcspError(Exception):
    """Base class; ``kind`` is the machine-readable tag used by the CLI."""

    kind = "error"


class InputError(UdcspError, ValueError):
    kind = "input"


class BudgetError(UdcspError):
    kind = "budget"


class PreconditionError(UdcspError):
    """A solver refused an instance outside its scope."""

    kind = "precondition"


class InternalError(UdcspError, AssertionError):
    """Two independent routes disagreed, or a guarantee was broken."""

    kind = "internal"
