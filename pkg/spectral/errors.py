"""Exception hierarchy shared by the spectral modules.

Everything derives from :class:`SpectralError` (itself a ``ValueError``) so the
CLI can map any input or precondition problem to exit code 2 with one
``except`` clause, while the theorem harness can tell the numerically
ambiguous cases (resample) apart from genuine contract violations.
"""

from __future__ import annotations


class SpectralError(ValueError):
    """Base class for all errors raised by the ``spectral`` package."""


class NotOnCircleError(SpectralError):
    """A value that must be unimodular is not, within tolerance."""


class OutsideDiskError(SpectralError):
    """A coefficient that must lie in the (closed or open) disk does not."""


class BoundaryAmbiguousError(SpectralError):
    """A point sits within matching tolerance of an arc endpoint."""


class DuplicatePointError(SpectralError):
    """Two points of a would-be cyclic set coincide within tolerance."""


class SharedPointError(SpectralError):
    """Two sets that must be disjoint share a point within tolerance."""

    def __init__(self, message: str, point: complex | None = None):
        super().__init__(message)
        self.point = point


class SizeMismatchError(SpectralError):
    """Operands have incompatible sizes."""


class DegreeError(SpectralError):
    """Requested degree exceeds the available coefficients."""


class NotUnitaryError(SpectralError):
    """A matrix fails the unitarity check."""


class RankError(SpectralError):
    """A difference of unitaries is zero or has rank greater than one."""


class PreconditionError(SpectralError):
    """Any other violated precondition of an operation."""


__all__ = [
    "SpectralError",
    "NotOnCircleError",
    "OutsideDiskError",
    "BoundaryAmbiguousError",
    "DuplicatePointError",
    "SharedPointError",
    "SizeMismatchError",
    "DegreeError",
    "NotUnitaryError",
    "RankError",
    "PreconditionError",
]
