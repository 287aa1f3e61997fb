"""Exception types shared across the package."""

from __future__ import annotations


class FoonError(Exception):
    """Base class for every error raised by this package."""


class ParseError(FoonError):
    """A file does not follow the tab-delimited annotation grammar.

    Carries the offending (1-based) line number when one is known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class EmptyUniverseError(FoonError):
    """A graph was requested from zero functional units."""


class UnknownGoalError(FoonError):
    """The goal node is neither producible by any unit nor in the kitchen."""


class MissingMotionRateError(FoonError):
    """A motion has no success rate and no default rate applies."""


class OracleCapExceededError(FoonError):
    """The universe is too large for exhaustive tree enumeration."""
