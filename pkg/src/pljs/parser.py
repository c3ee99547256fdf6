"""Operator-precedence reader: tokens -> TermAst, source -> ModuleAst."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lexer
from .errors import ParseError, ReadError
from .lexer import Token
from .ops import OpTable, default_table
from .terms import NIL, Atom, Compound, Float, Int, Pos, Str, Term, Var, mklist

_TERM_STARTERS = {"integer", "float", "string", "variable", "atom"}


class TokenStream:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.i = 0

    def peek(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input")
        self.i += 1
        return t

    def at_end(self) -> bool:
        return self.i >= len(self.toks)


class _TermParser:
    def __init__(self, ts: TokenStream, table: OpTable):
        self.ts = ts
        self.table = table
        self.anon = 0

    def fresh_anon(self, base: str) -> str:
        self.anon += 1
        return f"_G{self.anon}"

    def err(self, msg: str, tok: Token | None = None) -> ParseError:
        if tok is None:
            tok = self.ts.peek() or (self.ts.toks[-1] if self.ts.toks else None)
        if tok is None:
            return ParseError(msg)
        return ParseError(msg, tok.line, tok.col)

    def parse(self, maxp: int) -> Term:
        left, lp = self.parse_left(maxp)
        return self.parse_ops(left, lp, maxp)

    def can_start_term(self, tok: Token | None) -> bool:
        if tok is None:
            return False
        if tok.kind in _TERM_STARTERS:
            return True
        return tok.kind == "punct" and tok.text in "([{"

    def parse_left(self, maxp: int) -> tuple[Term, int]:
        tok = self.ts.next()
        pos = Pos(tok.line, tok.col)
        if tok.kind == "integer":
            return Int(tok.value if tok.value is not None else int(tok.text), pos), 0
        if tok.kind == "float":
            return Float(tok.value, pos), 0
        if tok.kind == "string":
            return Str(tok.value, pos), 0
        if tok.kind == "variable":
            name = tok.text
            if name.startswith("_"):
                name = self.fresh_anon(name)
            return Var(name, pos), 0
        if tok.kind == "punct":
            if tok.text == "(":
                t = self.parse(1200)
                self.expect_punct(")")
                return t, 0
            if tok.text == "[":
                return self.parse_list(pos), 0
            if tok.text == "{":
                t = self.parse(1200)
                self.expect_punct("}")
                return Compound("{}", (t,), pos), 0
            raise self.err(f"unexpected {tok.text!r}", tok)
        if tok.kind == "end":
            raise self.err("unexpected end of clause", tok)
        assert tok.kind == "atom"
        name = tok.value if tok.value is not None else tok.text
        nxt = self.ts.peek()
        # functor application: name immediately followed by '('
        if (
            nxt is not None
            and nxt.kind == "punct"
            and nxt.text == "("
            and not nxt.layout_before
        ):
            self.ts.next()
            args = [self.parse(999)]
            while self.is_punct(self.ts.peek(), ","):
                self.ts.next()
                args.append(self.parse(999))
            self.expect_punct(")")
            return Compound(name, tuple(args), pos), 0
        # negative numeric literal: '-' directly attached to a number
        if (
            name == "-"
            and nxt is not None
            and nxt.kind in ("integer", "float")
            and not nxt.layout_before
        ):
            self.ts.next()
            if nxt.kind == "integer":
                return Int(-(nxt.value if nxt.value is not None else int(nxt.text)), pos), 0
            return Float(-nxt.value, pos), 0
        pre = self.table.prefix.get(name)
        if pre is not None and self.can_start_term(nxt) and not self.starts_infix_only(nxt):
            prio, typ = pre
            if prio <= maxp:
                sub = prio if typ == "fy" else prio - 1
                arg = self.parse(sub)
                return Compound(name, (arg,), pos), prio
        return Atom(name, pos), 0

    def starts_infix_only(self, tok: Token | None) -> bool:
        """An atom token that is only usable as an infix operator does not
        begin a term (so `a - = b` reads `-` as an atom, not prefix)."""
        if tok is None or tok.kind != "atom":
            return False
        name = tok.value if tok.value is not None else tok.text
        return (
            name in self.table.infix
            and name not in self.table.prefix
            and not self.can_start_term(self.ts.peek(1))
        )

    def parse_ops(self, left: Term, leftp: int, maxp: int) -> Term:
        while True:
            tok = self.ts.peek()
            if tok is None or tok.kind == "end":
                return left
            name = None
            if tok.kind == "atom":
                name = tok.value if tok.value is not None else tok.text
            elif tok.kind == "punct" and tok.text == ",":
                name = ","
            if name is None:
                return left
            inf = self.table.infix.get(name)
            if inf is not None:
                prio, typ = inf
                la = prio if typ[0] == "y" else prio - 1
                ra = prio if typ[2] == "y" else prio - 1
                if prio <= maxp and leftp <= la:
                    self.ts.next()
                    right = self.parse(ra)
                    left = Compound(name, (left, right), Pos(tok.line, tok.col))
                    leftp = prio
                    continue
            post = self.table.postfix.get(name)
            if post is not None:
                prio, typ = post
                la = prio if typ[0] == "y" else prio - 1
                if prio <= maxp and leftp <= la:
                    self.ts.next()
                    left = Compound(name, (left,), Pos(tok.line, tok.col))
                    leftp = prio
                    continue
            return left

    def parse_list(self, pos: Pos) -> Term:
        items = [self.parse(999)]
        while self.is_punct(self.ts.peek(), ","):
            self.ts.next()
            items.append(self.parse(999))
        tail: Term = NIL
        if self.is_punct(self.ts.peek(), "|"):
            self.ts.next()
            tail = self.parse(999)
        self.expect_punct("]")
        return mklist(items, tail)

    @staticmethod
    def is_punct(tok: Token | None, text: str) -> bool:
        return tok is not None and tok.kind == "punct" and tok.text == text

    def expect_punct(self, text: str) -> None:
        tok = self.ts.peek()
        if not self.is_punct(tok, text):
            raise self.err(f"expected {text!r}")
        self.ts.next()


def parse_term(tokens: list[Token], table: OpTable | None = None) -> Term:
    """Parse one term of priority <= 1200 covering the tokens up to `end`."""
    ts = TokenStream(tokens)
    t = _parse_until_end(ts, table or default_table())
    if not ts.at_end():
        tok = ts.peek()
        raise ParseError("trailing tokens after clause end", tok.line, tok.col)
    return t


def _parse_until_end(ts: TokenStream, table: OpTable) -> Term:
    p = _TermParser(ts, table)
    t = p.parse(1200)
    tok = ts.peek()
    if tok is None or tok.kind != "end":
        raise p.err("operator clash or missing '.'")
    ts.next()
    return t


def parse_term_text(text: str, table: OpTable | None = None) -> Term:
    text = text.strip()
    if not text.endswith("."):
        text += " ."
    return parse_term(lexer.tokenize(text), table)


@dataclass
class ModuleAst:
    name: str
    exports: list[tuple[str, int]]
    imports: list[tuple[str, object]]  # (module, 'all' | [(name, arity), ...])
    clauses: list[tuple[Term, Term]] = field(default_factory=list)
    foreign_decls: list = field(default_factory=list)
    ops: OpTable = field(default_factory=lambda: default_table().copy())
    warnings: list[str] = field(default_factory=list)
    explicit_module: bool = False


def _pred_indicator(t: Term) -> tuple[str, int]:
    if isinstance(t, Compound) and t.name == "/" and len(t.args) == 2:
        name, arity = t.args
        if isinstance(name, Atom) and isinstance(arity, Int):
            return (name.name, arity.value)
    raise ReadError(f"bad name/arity: {t}", t.pos.line if t.pos else None, t.pos.col if t.pos else None)


def _list_items(t: Term, what: str) -> list[Term]:
    from .terms import list_parts

    items, tail = list_parts(t)
    if tail != NIL:
        raise ReadError(f"bad {what} list")
    return items


def read_module(source: str, name_hint: str = "user") -> ModuleAst:
    """Read a module source file: partition directives from clauses.

    Without a leading `:- module(...)` directive the module is `user` and
    exports every predicate it defines.
    """
    from . import ffi

    toks = lexer.tokenize(source)
    ts = TokenStream(toks)
    mod = ModuleAst(name=name_hint, exports=[], imports=[])
    first = True
    saw_eof_marker = False

    while not ts.at_end():
        if _at_foreign_class(ts):
            decl = _read_foreign_class(ts, mod.ops)
            mod.foreign_decls.append(ffi.parse_foreign_class(decl[0], decl[1], mod))
            first = False
            continue
        t = _parse_until_end(ts, mod.ops)
        if isinstance(t, Atom) and t.name == "end_of_file":
            saw_eof_marker = True
            continue
        if saw_eof_marker:
            raise ReadError("clause after end_of_file marker")
        if isinstance(t, Compound) and t.name == ":-" and len(t.args) == 1:
            _handle_directive(t.args[0], mod, first, ts)
            first = False
            continue
        first = False
        if isinstance(t, Compound) and t.name == ":-" and len(t.args) == 2:
            head, body = t.args
        else:
            head, body = t, Atom("true")
        if not isinstance(head, (Atom, Compound)):
            raise ReadError(f"clause head is not callable: {head}")
        mod.clauses.append((head, body))

    if not mod.explicit_module:
        seen: list[tuple[str, int]] = []
        for head, _ in mod.clauses:
            key = (head.name, len(head.args) if isinstance(head, Compound) else 0)
            if key not in seen:
                seen.append(key)
        for d in mod.foreign_decls:
            for key in d.export_keys():
                if key not in seen:
                    seen.append(key)
        mod.exports = seen
    return mod


def _handle_directive(d: Term, mod: ModuleAst, first: bool, ts: TokenStream) -> None:
    from . import ffi

    if isinstance(d, Compound) and d.name == "module" and len(d.args) == 2:
        if not first:
            mod.warnings.append("module/2 directive is not first; ignored")
            return
        name, exports = d.args
        if not isinstance(name, Atom):
            raise ReadError("module name must be an atom")
        mod.name = name.name
        mod.exports = [_pred_indicator(e) for e in _list_items(exports, "export")]
        mod.explicit_module = True
        return
    if isinstance(d, Compound) and d.name == "use_module" and len(d.args) in (1, 2):
        m = d.args[0]
        if not isinstance(m, Atom):
            raise ReadError("use_module: module name must be an atom")
        if len(d.args) == 1:
            mod.imports.append((m.name, "all"))
        else:
            preds = [_pred_indicator(e) for e in _list_items(d.args[1], "import")]
            mod.imports.append((m.name, preds))
        return
    if isinstance(d, Compound) and d.name == "op" and len(d.args) == 3:
        prio, typ, names = d.args
        if not (isinstance(prio, Int) and isinstance(typ, Atom)):
            raise ReadError("bad op/3 directive")
        targets = [names] if isinstance(names, Atom) else _list_items(names, "op name")
        for nm in targets:
            if not isinstance(nm, Atom):
                raise ReadError("bad op/3 operator name")
            mod.ops.add(prio.value, typ.name, nm.name)
        return
    if isinstance(d, Compound) and d.name == "pred" and len(d.args) == 1:
        mod.foreign_decls.append(ffi.parse_foreign_decl(d))
        return
    mod.warnings.append(f"unknown directive ignored: {_directive_name(d)}")


def _directive_name(d: Term) -> str:
    if isinstance(d, Atom):
        return d.name + "/0"
    if isinstance(d, Compound):
        return f"{d.name}/{len(d.args)}"
    return str(d)


def _at_foreign_class(ts: TokenStream) -> bool:
    pat = [("atom", ":-"), ("atom", "js"), ("atom", ":"), ("atom", "foreign_class")]
    for k, (kind, text) in enumerate(pat):
        tok = ts.peek(k)
        if tok is None or tok.kind != kind or (tok.value or tok.text) != text:
            return False
    return True


def _read_foreign_class(ts: TokenStream, table: OpTable) -> tuple[str, list[Term]]:
    """Dedicated reader mode for `:- js:foreign_class name { ... }.` blocks."""
    for _ in range(4):
        ts.next()
    name_tok = ts.next()
    if name_tok.kind != "atom":
        raise ReadError("foreign_class: expected class name atom", name_tok.line, name_tok.col)
    opener = ts.next()
    if not (opener.kind == "punct" and opener.text == "{"):
        raise ReadError("foreign_class: expected '{'", opener.line, opener.col)
    methods: list[Term] = []
    while True:
        tok = ts.peek()
        if tok is None:
            raise ReadError("unterminated foreign_class block")
        if tok.kind == "punct" and tok.text == "}":
            ts.next()
            end = ts.peek()
            if end is None or end.kind != "end":
                raise ReadError("foreign_class: expected '.' after '}'")
            ts.next()
            return (name_tok.value or name_tok.text, methods)
        t = _parse_until_end(ts, table)
        if not (isinstance(t, Compound) and t.name == ":-" and len(t.args) == 1):
            raise ReadError("foreign_class blocks may contain only ':- pred' directives")
        methods.append(t.args[0])
