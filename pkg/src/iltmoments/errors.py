"""Exception types raised across the package."""

from __future__ import annotations


class IltError(Exception):
    """Base class for errors raised by iltmoments."""


class DomainError(IltError, ValueError):
    """Argument outside the domain of a special function."""


class InvalidOrderError(IltError, ValueError):
    """Matrix order outside the supported range."""


class MalformedInputError(IltError, ValueError):
    """Input violates a structural precondition (e.g. row sums, connectivity)."""


class DisconnectedGraphError(MalformedInputError):
    """An operation would produce (or was given) a disconnected graph."""


class PoleError(IltError, ValueError):
    """Evaluation point lies outside the convergence region of Gamma_G."""


class ConvergenceError(IltError, RuntimeError):
    """Adaptive cubature hit its evaluation budget before meeting tolerance.

    ``estimate`` carries the best result found so far.
    """

    def __init__(self, message: str, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class TaintedEstimateError(IltError, RuntimeError):
    """Monte Carlo integrand produced non-finite values."""

    def __init__(self, message: str, rejected: int):
        super().__init__(message)
        self.rejected = rejected


class ConstantsParseError(IltError, ValueError):
    """Malformed constants file; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class IncompleteConstantsError(IltError, ValueError):
    """Fourth-moment assembly is missing inputs; ``missing`` lists them."""

    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__("missing inputs: " + ", ".join(self.missing))
