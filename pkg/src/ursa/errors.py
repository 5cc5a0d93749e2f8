"""Exception hierarchy shared by the front end, interpreter and driver."""

from __future__ import annotations


class UrsaError(Exception):
    """Base class; carries an optional source location."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}, column {self.col}: {self.message}"


class LexError(UrsaError):
    pass


class ParseError(UrsaError):
    pass


class KindError(ParseError):
    """Numeric expression used where a Boolean one is required, or vice versa."""


class UrsaRuntimeError(UrsaError):
    pass
