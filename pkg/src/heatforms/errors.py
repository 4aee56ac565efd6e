"""Exception types shared across the package."""

__all__ = [
    "HeatformsError",
    "DomainError",
    "KindMismatchError",
    "CoincidentPointsError",
    "CutLocusError",
    "DecayHintError",
    "UnsupportedGroupError",
    "EnumerationOverflowError",
    "NonconvergenceError",
]


class HeatformsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HeatformsError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class KindMismatchError(DomainError):
    """Points or fields from one surface were passed to another surface's operation."""


class CoincidentPointsError(DomainError):
    """The operation requires two distinct points."""


class CutLocusError(DomainError):
    """Distance derivatives were requested at or next to the spherical cut locus."""


class DecayHintError(DomainError):
    """A decay hint is missing, too weak for the surface, or contradicted by samples."""


class UnsupportedGroupError(DomainError):
    """The covering-group variant is not valid for the requested operation."""


class EnumerationOverflowError(HeatformsError):
    """A group enumeration would exceed the element-count guard."""


class NonconvergenceError(HeatformsError):
    """A quadrature or series failed to reach the requested tolerance.

    Carries the best error estimate actually achieved so callers can decide
    whether the partial result is still usable.
    """

    def __init__(self, message, achieved=None, requested=None):
        super().__init__(message)
        self.achieved = achieved
        self.requested = requested
