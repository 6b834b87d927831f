"""Exception hierarchy.

Two families matter to callers: ``MalformedInputError`` (the data itself is
unusable) and ``PreconditionError`` (the data is well formed but a checked
mathematical hypothesis fails). The CLI maps them to exit codes 2 and 1.
"""

from __future__ import annotations


class NormdomError(Exception):
    pass


class MalformedInputError(NormdomError, ValueError):
    pass


class InvalidNormError(MalformedInputError):
    """Raised by norm constructors (zero weight, empty max, ...)."""


class DimensionMismatchError(MalformedInputError):
    pass


class PreconditionError(NormdomError):
    """A checked hypothesis failed. ``diagnostic`` is JSON-ready detail."""

    def __init__(self, message: str, diagnostic: dict | None = None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class DomainViolationError(PreconditionError):
    """A norm was evaluated outside the slice it is defined on."""


class UnsupportedShapeError(PreconditionError):
    pass


class UncoveredBallError(PreconditionError):
    """The closed unit ball of a base norm is not inside the cover."""


class ZeroSeparationError(PreconditionError):
    pass


class SliceCoverageError(PreconditionError):
    pass


class SampleNotInSetError(PreconditionError):
    pass


class InvalidPairError(PreconditionError):
    pass


class OutOfDomainError(PreconditionError):
    pass
