"""Exception types shared across the package.

Two categories matter to callers (and to the CLI exit codes): bad input
versus a numerical result that violates an internal consistency guarantee.
"""


class DimcertError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(DimcertError, ValueError):
    """Invalid dimension, parameter, rank, state, or unsupported request."""


class NumericalConsistencyError(DimcertError, ArithmeticError):
    """A quantity that must be real/consistent came out otherwise.

    Raised when floating-point output contradicts a mathematical guarantee
    (e.g. a correlation coefficient with an imaginary part beyond 1e-9),
    which points at a corrupted input matrix rather than roundoff.
    """
