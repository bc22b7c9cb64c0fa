"""Exception types shared across the package."""
from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain of a curve or distribution.

    ``bound`` carries the violated limit (in the units of the argument) when
    there is one, so callers can print an actionable message.
    """

    def __init__(self, message: str, bound: float | None = None, index: int | None = None):
        super().__init__(message)
        self.bound = bound
        self.index = index


class RangeError(ValueError):
    """A requested value is not attained by a curve or a cdf.

    ``kind`` is ``"below_asymptote"`` or ``"above_supremum"``; ``limit`` is the
    value that cannot be crossed (a stress, or a cdf supremum).
    """

    def __init__(self, message: str, kind: str, limit: float | None = None):
        super().__init__(message)
        self.kind = kind
        self.limit = limit


class DataError(ValueError):
    """Malformed or unusable input data.  ``row`` is 1-based over data rows."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class FitError(RuntimeError):
    """Fitting failed.  ``best`` holds the best point found, if any."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class QuadratureError(ArithmeticError):
    """Numerical integration did not reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved
