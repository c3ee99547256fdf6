"""Tokenizer for the Prolog subset.

Skipped layout is `%` line comments, `/* */` block comments, and
whitespace; concatenating token lexemes with the skipped stretches
reproduces the source exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import LexError

SYMBOL_CHARS = set("+-*/\\^<>=~:.?@#&$")
SOLO = set("()[]{},|")

_NAME_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")
_VAR_RE = re.compile(r"[A-Z_][a-zA-Z0-9_]*")
_INT_RE = re.compile(r"\d+")


@dataclass
class Token:
    kind: str  # atom | variable | integer | float | string | punct | end
    text: str
    line: int
    col: int
    value: object = None
    layout_before: bool = False  # whitespace/comment preceded this token

    def __repr__(self) -> str:
        return f"Token({self.kind},{self.text!r}@{self.line}:{self.col})"


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(source)
    line, col = 1, 1
    layout = False

    def err(msg: str, ln: int, co: int) -> LexError:
        return LexError(msg, ln, co)

    def advance(text: str) -> None:
        nonlocal line, col
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)

    def emit(kind: str, text: str, value: object = None) -> None:
        nonlocal layout
        toks.append(Token(kind, text, line, col, value, layout))
        layout = False
        advance(text)

    while i < n:
        c = source[i]
        # layout
        if c in " \t\r\n":
            j = i
            while j < n and source[j] in " \t\r\n":
                j += 1
            advance(source[i:j])
            i = j
            layout = True
            continue
        if c == "%":
            j = source.find("\n", i)
            j = n if j < 0 else j
            advance(source[i:j])
            i = j
            layout = True
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise err("unterminated block comment", line, col)
            advance(source[i : j + 2])
            i = j + 2
            layout = True
            continue

        if c in SOLO:
            if c == "[" and i + 1 < n and source[i + 1] == "]":
                emit("atom", "[]")
                i += 2
                continue
            if c == "{" and i + 1 < n and source[i + 1] == "}":
                emit("atom", "{}")
                i += 2
                continue
            emit("punct", c)
            i += 1
            continue

        if c == "!" or c == ";":
            emit("atom", c)
            i += 1
            continue

        if c.isdigit():
            start_l, start_c = line, col
            if source.startswith("0'", i) and i + 2 < n:
                ch = source[i + 2]
                if ch == "\\":
                    text, code = _read_escape_char(source, i + 2, start_l, start_c)
                    emit("integer", source[i : i + 2] + text, code)
                    i += 2 + len(text)
                else:
                    emit("integer", source[i : i + 3], ord(ch))
                    i += 3
                continue
            if source.startswith("0x", i) or source.startswith("0X", i):
                m = re.match(r"0[xX][0-9a-fA-F]+", source[i:])
                if m:
                    emit("integer", m.group(0), int(m.group(0), 16))
                    i += m.end()
                    continue
            m = re.match(r"\d+\.\d+(?:[eE][+-]?\d+)?", source[i:])
            if m:
                emit("float", m.group(0), float(m.group(0)))
                i += m.end()
                continue
            m = _INT_RE.match(source, i)
            emit("integer", m.group(0), int(m.group(0)))
            i = m.end()
            continue

        m = _VAR_RE.match(source, i)
        if m:
            emit("variable", m.group(0))
            i = m.end()
            continue

        m = _NAME_RE.match(source, i)
        if m:
            emit("atom", m.group(0))
            i = m.end()
            continue

        if c == "'":
            text, value = _read_quoted(source, i, "'", line, col)
            emit("atom", text, value)
            i += len(text)
            continue
        if c == '"':
            text, value = _read_quoted(source, i, '"', line, col)
            emit("string", text, value)
            i += len(text)
            continue

        if c in SYMBOL_CHARS:
            j = i
            while j < n and source[j] in SYMBOL_CHARS:
                j += 1
            sym = source[i:j]
            # a '.' followed by layout, EOF, or a line comment ends the clause
            if sym[0] == ".":
                nxt = source[j] if sym == "." and j < n else None
                if sym == "." and (j >= n or nxt in " \t\r\n%"):
                    emit("end", ".")
                    i = j
                    continue
            emit("atom", sym)
            i = j
            continue

        raise err(f"unexpected character {c!r}", line, col)

    return toks


_ESCAPES = {
    "n": "\n",
    "t": "\t",
    "r": "\r",
    "a": "\a",
    "b": "\b",
    "f": "\f",
    "v": "\v",
    "\\": "\\",
    "'": "'",
    '"': '"',
    "`": "`",
    "0": "\0",
}


def _read_escape_char(source: str, i: int, line: int, col: int) -> tuple[str, int]:
    # source[i] == '\\'; returns (lexeme from i, char code)
    if i + 1 >= len(source):
        raise LexError("unterminated escape", line, col)
    c = source[i + 1]
    if c in _ESCAPES:
        return source[i : i + 2], ord(_ESCAPES[c])
    raise LexError(f"bad escape \\{c}", line, col)


def _read_quoted(source: str, i: int, q: str, line: int, col: int) -> tuple[str, str]:
    """Read a quoted atom or string starting at source[i] == q.
    Returns (raw lexeme including quotes, unescaped value)."""
    j = i + 1
    out: list[str] = []
    n = len(source)
    while j < n:
        c = source[j]
        if c == q:
            if j + 1 < n and source[j + 1] == q:  # doubled quote
                out.append(q)
                j += 2
                continue
            return source[i : j + 1], "".join(out)
        if c == "\\":
            if j + 1 < n and source[j + 1] == "\n":  # line continuation
                j += 2
                continue
            if j + 1 < n and source[j + 1] in _ESCAPES:
                out.append(_ESCAPES[source[j + 1]])
                j += 2
                continue
            m = re.match(r"\\x([0-9a-fA-F]+)\\", source[j:])
            if m:
                out.append(chr(int(m.group(1), 16)))
                j += m.end()
                continue
            raise LexError("bad escape in quoted token", line, col)
        if c == "\n":
            raise LexError("unterminated quoted token", line, col)
        out.append(c)
        j += 1
    kind = "string" if q == '"' else "quoted atom"
    raise LexError(f"unterminated {kind}", line, col)
