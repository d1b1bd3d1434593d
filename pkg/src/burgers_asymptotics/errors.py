"""Exception hierarchy.

Every numerical failure carries a ``context`` dict so the CLI can serialize
it to JSON without knowing which module raised it.
"""

from __future__ import annotations

from typing import Any


class BurgersError(Exception):
    """Base class for all package errors."""

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.context = context

    def to_dict(self) -> dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self), "context": self.context}


class AdmissibilityError(BurgersError, ValueError):
    """Exponents, amplitudes or zoom rates outside their admissible range."""


class DegenerateLandscapeError(BurgersError):
    """A critical point of the phase function has (numerically) zero curvature."""


class AmbiguousBranchError(BurgersError):
    """Two maxima of the phase function tie; a one-point Laplace value is undefined."""


class BranchMissingError(BurgersError):
    """The landscape does not have the expected two-maxima structure."""


class FoldError(BurgersError):
    """The positive branch root is requested at or below the fold threshold."""


class StructuralError(BurgersError):
    """A limit object failed one of its structural invariants."""


class QuadratureError(BurgersError):
    """Requested tolerance not reached; ``best_value`` holds the last estimate."""

    def __init__(self, message: str, best_value: float, error_estimate: float, **context: Any) -> None:
        super().__init__(message, best_value=best_value, error_estimate=error_estimate, **context)
        self.best_value = best_value
        self.error_estimate = error_estimate


class StabilityError(BurgersError):
    """Time step violates the oracle's CFL constraint, or a run guard was hit."""
