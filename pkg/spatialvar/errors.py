"""
Exception types raised by spatialvar.

Two families, matching the two ways a request can fail:

InputError
    The caller handed over something malformed or inconsistent
    (CSV parse failures, dimension mismatch, bad grids). CLI exit 1.
DomainError
    The request is well formed but mathematically out of range
    (alpha outside (0, 1], Stirling cap, N=1 where off-diagonal sums
    are needed, infeasible rejection sampling). CLI exit 2.

Both subclass ValueError so generic callers can catch either.
"""
from __future__ import annotations

__all__ = ["SpatialVarError", "InputError", "DomainError"]


class SpatialVarError(ValueError):
    """
    Base class carrying a short machine-readable ``reason`` slug.

    Parameters
    ----------
    message : str
        Human readable description
    reason : str
        Stable slug such as ``"dimension-mismatch"`` used by the CLI
    """

    kind = "error"

    def __init__(self, message: str, reason: str = "unspecified") -> None:
        super().__init__(message)
        self.reason = reason

    def one_line(self) -> str:
        """Single machine-parsable line for stderr."""
        text = str(self).replace("\n", " ").replace('"', "'")
        return f'error={self.kind} reason={self.reason} message="{text}"'


class InputError(SpatialVarError):
    kind = "input"


class DomainError(SpatialVarError):
    kind = "domain"
