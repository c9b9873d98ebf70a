"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI:
  2 usage / configuration, 3 data, 4 numeric or domain, 5 validation gate.
"""


class GhillError(Exception):
    """Base class for all package errors."""

    exit_code = 4


class ConfigError(GhillError):
    """Bad run configuration (unknown mode, invalid model spec, ...)."""

    exit_code = 2


class DataError(GhillError):
    """Problems with input data (parse failures, insufficient rows, ...)."""

    exit_code = 3


class InsufficientDataError(DataError):
    pass


class PositivityError(DataError):
    """Non-positive values where logarithms are required."""


class DomainError(GhillError):
    """Argument outside the mathematical domain of an operation."""

    exit_code = 4


class DivergentSeriesError(DomainError):
    """An infinite series required to be finite diverges."""


class ModelValidityError(DomainError):
    """A tail model violates its representation constraints."""


class UnsupportedWeightError(DomainError):
    """Weight family lacks the structure an operation needs (e.g. no tail rule)."""


class NumericError(GhillError):
    """Numerical failure (factorization, unreachable tolerance, ...)."""

    exit_code = 4


class GateFailure(GhillError):
    """A validation gate did not pass."""

    exit_code = 5
