"""Exception hierarchy shared by the library and the CLI."""

import os


class FdxError(Exception):
    """Base class for all package errors."""


class ValidationError(FdxError, ValueError):
    """Malformed input; the CLI maps these to exit code 2."""


class DimensionMismatch(ValidationError):
    pass


class NonRational(ValidationError):
    pass


class DiagonalPresent(ValidationError):
    pass


class InvalidAllocation(ValidationError):
    pass


class SameAgent(ValidationError):
    pass


class OverlappingBundles(ValidationError):
    pass


class NotBinary(ValidationError):
    pass


class ColorCountMismatch(ValidationError):
    pass


class NotPowerOfTwo(ValidationError):
    pass


class AssumptionViolated(FdxError):
    """The balance precondition of the discard-witness construction failed."""


class BudgetExceeded(FdxError):
    """An exhaustive enumeration would exceed its configured budget."""


def resolve_budget(budget, default):
    """Pick an enumeration budget: explicit argument, then $FDX_BUDGET, then default."""
    if budget is not None:
        return int(budget)
    env = os.environ.get("FDX_BUDGET")
    if env:
        try:
            return int(float(env))
        except ValueError:
            raise ValidationError(f"FDX_BUDGET is not a number: {env!r}") from None
    return default
