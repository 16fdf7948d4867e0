"""Exception hierarchy shared by all modules."""


class IdealRegError(Exception):
    """Base class for domain errors raised by :mod:`idealreg`."""

    kind = "domain-error"


class InvalidArgumentError(IdealRegError, ValueError):
    kind = "invalid-argument"


class DegenerateInputError(IdealRegError, ValueError):
    kind = "degenerate-input"

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InsufficientRowsError(IdealRegError, ValueError):
    kind = "insufficient-rows"


class InsufficientDataError(IdealRegError, ValueError):
    kind = "insufficient-data"


class PreconditionViolation(IdealRegError, ValueError):
    kind = "precondition-violation"


class IdentifiabilityError(PreconditionViolation):
    """Too few input polynomials for the subspace to be identifiable (need n >= D + 1)."""

    kind = "identifiability-violation"


class NoConvergenceError(IdealRegError, RuntimeError):
    kind = "no-convergence"
