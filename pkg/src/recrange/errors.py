"""Exception types shared across the package.

Every error raised on purpose derives from :class:`RecRangeError`, so callers
can catch one base class. Subclasses also inherit the matching builtin
(ValueError or RuntimeError) to stay friendly to generic handling.
"""

from __future__ import annotations


class RecRangeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RecRangeError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class ParseError(RecRangeError, ValueError):
    """Input text could not be parsed as numeric data."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class InsufficientRecordsError(RecRangeError, ValueError):
    """Fewer records are available than the operation requires."""


class DegeneratePosteriorError(RecRangeError, ValueError):
    """The requested posterior summary does not exist for these parameters."""


class UnsupportedEstimatorError(RecRangeError, ValueError):
    """No closed-form sampling moments exist for this estimator."""


class ConvergenceError(RecRangeError, RuntimeError):
    """An iterative routine exhausted its iteration budget."""


class BracketFailureError(ConvergenceError):
    """A root bracket could not be established; the target is unreachable."""


class CapExhaustedError(RecRangeError, RuntimeError):
    """Stream sampling hit its draw cap before collecting enough records."""

    def __init__(self, message: str, partial=None, draws: int = 0):
        super().__init__(message)
        self.partial = partial  # RecordSummary of what was found, or None
        self.draws = draws
