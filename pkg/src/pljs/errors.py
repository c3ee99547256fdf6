"""Compiler error and warning types."""

from __future__ import annotations


class CompileError(Exception):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f" at {line}:{col}" if line is not None else ""
        super().__init__(message + where)


class LexError(CompileError):
    pass


class ParseError(CompileError):
    pass


class ReadError(CompileError):
    pass


class ResolveError(CompileError):
    pass


class FfiError(CompileError):
    pass


class EmitError(CompileError):
    pass
