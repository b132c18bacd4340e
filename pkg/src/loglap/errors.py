"""Exception types shared across the package.

The CLI maps these onto exit codes: ``PreconditionError`` -> 3,
``NumericalError`` -> 4. Library code raises them directly.
"""


class LoglapError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(LoglapError, ValueError):
    """An argument violates a documented domain restriction."""


class NumericalError(LoglapError, RuntimeError):
    """A numerical procedure failed (factorization, non-convergence, ...)."""
