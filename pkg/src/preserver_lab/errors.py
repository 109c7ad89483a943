"""Exception and warning classes shared across the package."""


class PreserverLabError(Exception):
    """Base class for all errors raised by preserver_lab."""


class InvalidInput(PreserverLabError, ValueError):
    pass


class CapExceeded(PreserverLabError):
    """An enumeration would exceed its configured size cap."""


class DegenerateInput(PreserverLabError, ValueError):
    """Coordinates coincide (or nearly so) where distinctness is required."""


class PreconditionViolated(PreserverLabError, ValueError):
    pass


class DomainError(PreserverLabError, ValueError):
    """A function was evaluated outside its domain."""


class NotConvergent(PreserverLabError):
    pass


class PatternInfeasible(PreserverLabError, ValueError):
    pass


class NumericalFailure(PreserverLabError, RuntimeError):
    pass


class ConditioningWarning(UserWarning):
    """A floating determinant was computed from badly scaled pivots."""
