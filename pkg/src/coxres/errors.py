"""Exception types shared by every module of the package."""

from __future__ import annotations


class CoxresError(Exception):
    """Base class for all errors raised by coxres."""


class ParameterError(CoxresError, ValueError):
    """An argument violates a documented precondition."""


class InadmissibleGroupError(ParameterError):
    """Group parameters violate the admissibility conditions of their family."""


class UnsupportedFamilyError(ParameterError):
    """The operation is not defined for the requested group family."""


class InconsistencyError(CoxresError):
    """An internal identity failed to hold; this always signals a bug."""


class AmbiguityError(CoxresError):
    """Several candidates survive a search that should single out one.

    The surviving candidates are kept on the exception so callers can
    show them instead of silently choosing.
    """

    def __init__(self, message: str, candidates: list):
        super().__init__(message)
        self.candidates = list(candidates)


class EnumerationSizeError(CoxresError):
    """A group closure grew past the configured element cap."""
