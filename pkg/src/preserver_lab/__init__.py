"""Entrywise positivity preservers in fixed dimension.

Modules
-------
linalg
    Symmetric eigenvalues, exact determinants, minors, total positivity,
    Hankel matrices, PSD sampling.
symfun
    Schur polynomials, (generalized) Vandermonde determinants and bounds.
thresholds
    Sharp and explicit thresholds for a negative coefficient.
preserver
    Power sums, certification, sign-pattern series, counterexamples.
hciz
    Haar unitaries and the Harish-Chandra-Itzykson-Zuber integral.
order
    Majorization, determinant criteria, log-supermodularity.
cli
    The ``preserver-lab`` command.
"""

from .errors import (
    CapExceeded,
    ConditioningWarning,
    DegenerateInput,
    DomainError,
    InvalidInput,
    NotConvergent,
    NumericalFailure,
    PatternInfeasible,
    PreconditionViolated,
    PreserverLabError,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "ConditioningWarning",
    "DegenerateInput",
    "DomainError",
    "InvalidInput",
    "NotConvergent",
    "NumericalFailure",
    "PatternInfeasible",
    "PreconditionViolated",
    "PreserverLabError",
]
