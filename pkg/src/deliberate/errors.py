"""Exceptions shared across the engine."""

from __future__ import annotations


class EngineError(ValueError):
    """Base class for errors raised by the engine."""


class ParseError(EngineError):
    """Malformed input document; carries the position of the offending text."""

    def __init__(self, message: str, line: int, column: int = 0, path: str | None = None):
        self.line = line
        self.column = column
        self.path = path
        where = f"{path or '<input>'}:{line}"
        if column:
            where += f":{column}"
        super().__init__(f"{where}: {message}")


class ZeroEvidenceError(EngineError):
    """The conditioning evidence has probability zero; no posterior exists."""


class StateSpaceError(EngineError):
    """A computation would enumerate more joint states than the configured cap."""
