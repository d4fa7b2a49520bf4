"""Shared exception and warning types."""


class BudgetExceededError(RuntimeError):
    """An enumeration exceeded its configured node budget (CLI exit code 2)."""


class InterpolationError(ValueError):
    """An exact-interpolation consistency check failed.

    Raised when the extra sample point of a degree-bounded fit does not lie on
    the fitted polynomial, i.e. the data is not polynomial of the claimed
    degree over the sampled grid.
    """


class RegimeWarning(UserWarning):
    """Parameters are outside the range where the series is trustworthy."""
