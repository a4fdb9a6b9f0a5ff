"""Arithmetic of the genus-2 twist family C_d : y^2 = f_d(x).

Point counting and Euler factors, tame conductors from cluster pictures,
counting tables over F_p, and the one-level-density sums behind the
average analytic rank bound.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BadPrime,
    CacheCorrupted,
    DegenerateModel,
    DomainError,
    Inapplicable,
    InconsistencyError,
    InferenceAmbiguous,
    NotReducible,
    TwistlabError,
    Unsupported,
    UsageError,
)

__all__ = [
    "__version__",
    "TwistlabError",
    "UsageError",
    "DomainError",
    "DegenerateModel",
    "NotReducible",
    "Inapplicable",
    "BadPrime",
    "InferenceAmbiguous",
    "InconsistencyError",
    "CacheCorrupted",
    "Unsupported",
]
