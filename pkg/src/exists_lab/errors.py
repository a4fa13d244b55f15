"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """Raised on lexical or grammar errors in query or data text."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class UnsupportedFeatureError(RuntimeError):
    """Raised for constructs that are parsed but deliberately not evaluated."""
