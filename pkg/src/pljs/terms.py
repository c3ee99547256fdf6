"""Term trees produced by the reader and consumed by every later stage.

Compounds always have arity >= 1; an arity-0 "compound" is an Atom.
Variable names starting with an underscore are anonymous: the reader
renames each occurrence apart, so they never unify by name.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Atom(Term):
    name: str
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Int(Term):
    value: int
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Float(Term):
    value: float
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Str(Term):
    text: str
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Compound(Term):
    name: str
    args: tuple[Term, ...]
    pos: Pos | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.args:
            raise ValueError("Compound arity must be >= 1; use Atom")


NIL = Atom("[]")
TRUE = Atom("true")


def mk(name: str, *args: Term) -> Term:
    return Compound(name, tuple(args)) if args else Atom(name)


def mklist(items: list[Term], tail: Term = NIL) -> Term:
    out = tail
    for item in reversed(items):
        out = Compound(".", (item, out))
    return out


def list_parts(t: Term) -> tuple[list[Term], Term]:
    """Split a '.'/2 chain into (elements, tail)."""
    items: list[Term] = []
    while isinstance(t, Compound) and t.name == "." and len(t.args) == 2:
        items.append(t.args[0])
        t = t.args[1]
    return items, t


def functor_of(t: Term) -> tuple[str, int] | None:
    if isinstance(t, Atom):
        return (t.name, 0)
    if isinstance(t, Compound):
        return (t.name, len(t.args))
    return None


def term_vars(t: Term, acc: list[Var] | None = None) -> list[Var]:
    """Variables of t in first-occurrence order."""
    out: list[Var] = [] if acc is None else acc
    stack = [t]
    seen = {v.name for v in out}
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            if x.name not in seen:
                seen.add(x.name)
                out.append(x)
        elif isinstance(x, Compound):
            stack.extend(reversed(x.args))
    return out


def rename_vars(t: Term, mapping: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Compound):
        return Compound(t.name, tuple(rename_vars(a, mapping) for a in t.args), t.pos)
    return t


_ATOM_PLAIN = None  # compiled lazily to avoid importing re at module top for no reason


def atom_needs_quotes(name: str) -> bool:
    import re

    global _ATOM_PLAIN
    if _ATOM_PLAIN is None:
        _ATOM_PLAIN = re.compile(r"^(?:[a-z][a-zA-Z0-9_]*|[+\-*/\\^<>=~:.?@#&$]+|!|;|\[\]|\{\})$")
    return _ATOM_PLAIN.match(name) is None


def format_atom(name: str, quoted: bool = False) -> str:
    if quoted and atom_needs_quotes(name):
        body = name.replace("\\", "\\\\").replace("'", "\\'").replace("\n", "\\n")
        return f"'{body}'"
    return name


def format_number(v: int | float) -> str:
    """Numeric output shared with the JS runtime: integral values print
    without a fractional part, so host doubles and Python ints agree."""
    if isinstance(v, float):
        if v != v or v in (float("inf"), float("-inf")):
            return repr(v)
        if v == int(v) and abs(v) < 2**53:
            return str(int(v))
        return repr(v)
    return str(v)


def format_term(t: Term, ops=None, quoted: bool = False, max_prio: int = 1200) -> str:
    """Canonical text for a term, using operator notation for the default
    table and [..|..] notation for lists.  Re-parsing the output yields a
    structurally identical tree."""
    from . import ops as opsmod

    table = ops if ops is not None else opsmod.default_table()

    def fmt(t: Term, maxp: int) -> str:
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Int):
            return format_number(t.value)
        if isinstance(t, Float):
            return format_number(t.value)
        if isinstance(t, Str):
            body = t.text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
            return f'"{body}"'
        if isinstance(t, Atom):
            return format_atom(t.name, quoted)
        assert isinstance(t, Compound)
        if t.name == "." and len(t.args) == 2:
            items, tail = list_parts(t)
            inner = ",".join(fmt(x, 999) for x in items)
            if tail == NIL:
                return f"[{inner}]"
            return f"[{inner}|{fmt(tail, 999)}]"
        if t.name == "{}" and len(t.args) == 1:
            return "{" + fmt(t.args[0], 1200) + "}"
        if len(t.args) == 2:
            op = table.infix.get(t.name)
            if op is not None:
                prio, typ = op
                lp = prio - (0 if typ[0] == "y" else 1)
                rp = prio - (0 if typ[2] == "y" else 1)
                sep = t.name if not t.name[0].isalpha() and t.name != "," else None
                if t.name == ",":
                    body = f"{fmt(t.args[0], lp)},{fmt(t.args[1], rp)}"
                elif sep is not None:
                    body = f"{fmt(t.args[0], lp)}{sep}{fmt(t.args[1], rp)}"
                else:
                    body = f"{fmt(t.args[0], lp)} {t.name} {fmt(t.args[1], rp)}"
                return f"({body})" if prio > maxp else body
        if len(t.args) == 1:
            op = table.prefix.get(t.name)
            if op is not None and t.name not in ("-", "+"):
                prio, typ = op
                rp = prio - (0 if typ[1] == "y" else 1)
                arg = fmt(t.args[0], rp)
                sep = " " if t.name[0].isalpha() or t.name[-1].isalpha() else ""
                body = f"{t.name}{sep}{arg}"
                return f"({body})" if prio > maxp else body
            if op is not None and t.name in ("-", "+"):
                prio, typ = op
                rp = prio - (0 if typ[1] == "y" else 1)
                arg = fmt(t.args[0], rp)
                sep = " " if arg[:1].isdigit() or arg[:1] in "+-" else ""
                body = f"{t.name}{sep}{arg}"
                return f"({body})" if prio > maxp else body
        head = format_atom(t.name, quoted)
        return head + "(" + ",".join(fmt(a, 999) for a in t.args) + ")"

    return fmt(t, max_prio)
