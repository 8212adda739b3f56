"""Exception hierarchy shared by every recipgrowth module."""

from __future__ import annotations


class RecipGrowthError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RecipGrowthError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateYearError(ParseError):
    pass


class DomainError(ParseError):
    """A value is outside the domain where reciprocals are defined (value <= 0)."""


class DatasetNotFoundError(RecipGrowthError, LookupError):
    pass


class InsufficientDataError(RecipGrowthError, ValueError):
    pass


class DegenerateDesignError(RecipGrowthError, ValueError):
    pass


class BeyondSingularityError(RecipGrowthError, ArithmeticError):
    """The reciprocal line is zero or negative, so the model value has blown up."""


class UndefinedRatioError(RecipGrowthError, ArithmeticError):
    pass


class FitError(RecipGrowthError, ValueError):
    """A fitted model violates its own invariants (e.g. a reciprocal polynomial
    that turns non-positive inside the fit window)."""
