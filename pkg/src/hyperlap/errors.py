"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class HyperlapError(Exception):
    """Base class for all library errors."""


class ValidationError(HyperlapError, ValueError):
    """Input violates a documented precondition (CLI exit code 1)."""


class ParseError(ValidationError):
    """Malformed hypergraph document."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ComputationError(HyperlapError, RuntimeError):
    """A numerical procedure could not produce a result (CLI exit code 2)."""
