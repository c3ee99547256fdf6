"""Operator tables for reading and printing.

The default table is the ISO core set plus the handful of operators the
module and foreign-declaration syntax needs (`:`, `::`, `pred`, prefix `+`).
"""

from __future__ import annotations

from .errors import ReadError

OpType = str  # xfx | xfy | yfx | fy | fx | xf | yf

_DEFAULT_INFIX: dict[str, tuple[int, OpType]] = {
    ":-": (1200, "xfx"),
    "-->": (1200, "xfx"),
    ";": (1100, "xfy"),
    "->": (1050, "xfy"),
    ",": (1000, "xfy"),
    "::": (978, "xfx"),
    "=": (700, "xfx"),
    "\\=": (700, "xfx"),
    "==": (700, "xfx"),
    "\\==": (700, "xfx"),
    "@<": (700, "xfx"),
    "@>": (700, "xfx"),
    "@=<": (700, "xfx"),
    "@>=": (700, "xfx"),
    "is": (700, "xfx"),
    "=:=": (700, "xfx"),
    "=\\=": (700, "xfx"),
    "<": (700, "xfx"),
    ">": (700, "xfx"),
    "=<": (700, "xfx"),
    ">=": (700, "xfx"),
    "=..": (700, "xfx"),
    "+": (500, "yfx"),
    "-": (500, "yfx"),
    "/\\": (500, "yfx"),
    "\\/": (500, "yfx"),
    "*": (400, "yfx"),
    "/": (400, "yfx"),
    "//": (400, "yfx"),
    "mod": (400, "yfx"),
    "rem": (400, "yfx"),
    "<<": (400, "yfx"),
    ">>": (400, "yfx"),
    "**": (200, "xfx"),
    "^": (200, "xfy"),
    ":": (200, "xfy"),
}

_DEFAULT_PREFIX: dict[str, tuple[int, OpType]] = {
    ":-": (1200, "fx"),
    "?-": (1200, "fx"),
    "pred": (1150, "fx"),
    "\\+": (900, "fy"),
    "-": (200, "fy"),
    "+": (200, "fy"),
    "\\": (200, "fy"),
}


class OpTable:
    def __init__(self) -> None:
        self.infix: dict[str, tuple[int, OpType]] = dict(_DEFAULT_INFIX)
        self.prefix: dict[str, tuple[int, OpType]] = dict(_DEFAULT_PREFIX)
        self.postfix: dict[str, tuple[int, OpType]] = {}

    def copy(self) -> "OpTable":
        t = OpTable.__new__(OpTable)
        t.infix = dict(self.infix)
        t.prefix = dict(self.prefix)
        t.postfix = dict(self.postfix)
        return t

    def add(self, prio: int, typ: OpType, name: str) -> None:
        if not 0 <= prio <= 1200:
            raise ReadError(f"op/3 priority out of range: {prio}")
        if typ in ("xfx", "xfy", "yfx"):
            tab = self.infix
        elif typ in ("fy", "fx"):
            tab = self.prefix
        elif typ in ("xf", "yf"):
            tab = self.postfix
        else:
            raise ReadError(f"op/3 bad type: {typ}")
        if prio == 0:
            tab.pop(name, None)
        else:
            tab[name] = (prio, typ)

    def is_op(self, name: str) -> bool:
        return name in self.infix or name in self.prefix or name in self.postfix


_default: OpTable | None = None


def default_table() -> OpTable:
    global _default
    if _default is None:
        _default = OpTable()
    return _default
