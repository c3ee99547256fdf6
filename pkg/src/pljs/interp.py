"""Reference Prolog interpreter used as a test oracle.

Runs both raw control-structured programs (;, ->, \\+, !) and normalized
plain programs over one flat predicate namespace.  Unknown predicates fail
(matching the compiler's failing-stub behavior).  Numeric semantics mirror
the JS runtime: one number universe compared by value, `//` truncating,
`mod` floored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .normalize import PlainClause
from .terms import (
    NIL,
    Atom,
    Compound,
    Float,
    Int,
    Str,
    Term,
    Var,
    format_number,
    format_term,
    mk,
    mklist,
)


class PrologError(Exception):
    pass


class HaltSignal(Exception):
    def __init__(self, code: int = 0):
        self.code = code


class _Cut(Exception):
    def __init__(self, token: object):
        self.token = token


class Cell:
    __slots__ = ("ref", "ts")

    def __init__(self, ts: int):
        self.ref = self
        self.ts = ts

    def __repr__(self) -> str:
        return f"_G{self.ts}"


class Struct:
    __slots__ = ("name", "args")

    def __init__(self, name: str, args: list):
        self.name = name
        self.args = args


@dataclass
class Ctx:
    trail: list = field(default_factory=list)
    time: int = 0
    out: list = field(default_factory=list)

    def newvar(self) -> Cell:
        self.time += 1
        return Cell(self.time)

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        t = self.trail
        while len(t) > mark:
            t.pop().ref_reset()


# Cell undo helper kept on the class to avoid isinstance checks in the loop
def _ref_reset(self: Cell) -> None:
    self.ref = self


Cell.ref_reset = _ref_reset  # type: ignore[attr-defined]


def deref(t):
    while isinstance(t, Cell):
        if t.ref is t:
            return t
        t = t.ref
    return t


def bind(ctx: Ctx, c: Cell, t) -> None:
    c.ref = t
    ctx.trail.append(c)


def unify(ctx: Ctx, a, b) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = deref(x), deref(y)
        if x is y:
            continue
        if isinstance(x, Cell):
            if isinstance(y, Cell):
                if x.ts > y.ts:
                    bind(ctx, x, y)
                else:
                    bind(ctx, y, x)
            else:
                bind(ctx, x, y)
            continue
        if isinstance(y, Cell):
            bind(ctx, y, x)
            continue
        if isinstance(x, (Int, Float)):
            if isinstance(y, (Int, Float)) and x.value == y.value:
                continue
            return False
        if isinstance(x, Str):
            if isinstance(y, Str) and x.text == y.text:
                continue
            return False
        if isinstance(x, Atom):
            if isinstance(y, Atom) and x.name == y.name:
                continue
            return False
        if isinstance(x, Struct):
            if (
                isinstance(y, Struct)
                and x.name == y.name
                and len(x.args) == len(y.args)
            ):
                stack.extend(zip(x.args, y.args))
                continue
            return False
        return False
    return True


def instantiate(t: Term, env: dict, ctx: Ctx):
    if isinstance(t, Var):
        c = env.get(t.name)
        if c is None:
            c = ctx.newvar()
            env[t.name] = c
        return c
    if isinstance(t, Compound):
        return Struct(t.name, [instantiate(a, env, ctx) for a in t.args])
    return t


def reify(t, names: dict | None = None):
    """Runtime term -> TermAst; unbound cells become numbered variables."""
    t = deref(t)
    if isinstance(t, Cell):
        if names is None:
            return Var(f"_G{t.ts}")
        nm = names.get(id(t))
        if nm is None:
            nm = f"_{chr(ord('A') + len(names) % 26)}{len(names) // 26 or ''}"
            names[id(t)] = nm
        return Var(nm)
    if isinstance(t, Struct):
        return Compound(t.name, tuple(reify(a, names) for a in t.args))
    return t


def key_of(goal) -> tuple[str, int]:
    if isinstance(goal, Struct):
        return (goal.name, len(goal.args))
    if isinstance(goal, Atom):
        return (goal.name, 0)
    raise PrologError(f"goal is not callable: {goal!r}")


class Interp:
    def __init__(self, db: dict[tuple[str, int], list[tuple[Term, Term]]], ctx: Ctx | None = None):
        self.db = db
        self.ctx = ctx or Ctx()

    # -- database construction -------------------------------------------

    @staticmethod
    def from_clauses(clauses: list[tuple[Term, Term]]) -> "Interp":
        db: dict[tuple[str, int], list[tuple[Term, Term]]] = {}
        for head, body in clauses:
            key = (head.name, len(head.args) if isinstance(head, Compound) else 0)
            db.setdefault(key, []).append((head, body))
        return Interp(db)

    @staticmethod
    def from_plain(clauses: list[PlainClause]) -> "Interp":
        def conj(goals: list[Term]) -> Term:
            if not goals:
                return Atom("true")
            out = goals[-1]
            for g in reversed(goals[:-1]):
                out = Compound(",", (g, out))
            return out

        return Interp.from_clauses([(c.head, conj(c.body)) for c in clauses])

    # -- solving ----------------------------------------------------------

    def solve(self, goal, cut_token):
        ctx = self.ctx
        goal = deref(goal)
        if isinstance(goal, Cell):
            raise PrologError("unbound goal")
        if isinstance(goal, Compound):  # AST leaked in; should not happen
            raise PrologError("AST term used as goal")
        name, arity = key_of(goal)
        args = goal.args if isinstance(goal, Struct) else []

        if name == "," and arity == 2:
            for _ in self.solve(args[0], cut_token):
                yield from self.solve(args[1], cut_token)
            return
        if name == ";" and arity == 2:
            left = deref(args[0])
            if isinstance(left, Struct) and left.name == "->" and len(left.args) == 2:
                yield from self._ite(left.args[0], left.args[1], args[1], cut_token)
                return
            mark = ctx.mark()
            yield from self.solve(args[0], cut_token)
            ctx.undo(mark)
            yield from self.solve(args[1], cut_token)
            ctx.undo(mark)
            return
        if name == "->" and arity == 2:
            yield from self._ite(args[0], args[1], Atom("fail"), cut_token)
            return
        if name == "\\+" and arity == 1:
            mark = ctx.mark()
            if not self._has_solution(args[0]):
                ctx.undo(mark)
                yield
            else:
                ctx.undo(mark)
            return
        if name == "!" and arity == 0:
            yield
            raise _Cut(cut_token)
        if name == "call" and 1 <= arity <= 8:
            g = deref(args[0])
            if arity > 1:
                extra = [deref(a) for a in args[1:]]
                if isinstance(g, Atom):
                    g = Struct(g.name, extra)
                elif isinstance(g, Struct):
                    g = Struct(g.name, list(g.args) + extra)
                else:
                    raise PrologError("call/N: not callable")
            token = object()
            mark = ctx.mark()
            try:
                yield from self.solve(g, token)
                ctx.undo(mark)
            except _Cut as e:
                if e.token is not token:
                    raise
                ctx.undo(mark)
            return
        if name == ":" and arity == 2:
            # single-namespace oracle: drop the module qualifier
            yield from self.solve(args[1], cut_token)
            return

        bi = _BUILTINS.get((name, arity))
        if bi is not None:
            yield from bi(self, args)
            return

        clauses = self.db.get((name, arity))
        if clauses is None:
            return  # unknown predicate: fail (compiled stub behavior)
        token = object()
        mark = ctx.mark()
        try:
            for head, body in clauses:
                env: dict = {}
                h = instantiate(head, env, ctx)
                m2 = ctx.mark()
                if unify(ctx, goal, h):
                    b = instantiate(body, env, ctx)
                    yield from self.solve(b, token)
                ctx.undo(m2)
        except _Cut as e:
            if e.token is not token:
                raise
            ctx.undo(mark)

    def _has_solution(self, goal) -> bool:
        token = object()
        gen = self.solve(goal, token)
        try:
            next(gen)
            gen.close()
            return True
        except StopIteration:
            return False
        except _Cut as e:
            if e.token is token:
                return False
            raise

    def _ite(self, cond, then, els, cut_token):
        ctx = self.ctx
        mark = ctx.mark()
        token = object()
        gen = self.solve(cond, token)
        found = False
        try:
            next(gen)
            found = True
            gen.close()
        except StopIteration:
            pass
        except _Cut as e:
            if e.token is not token:
                raise
        if found:
            yield from self.solve(then, cut_token)
            ctx.undo(mark)
        else:
            ctx.undo(mark)
            yield from self.solve(els, cut_token)
            ctx.undo(mark)

    # -- evaluation -------------------------------------------------------

    def eval_arith(self, t):
        t = deref(t)
        if isinstance(t, (Int, Float)):
            return t.value
        if isinstance(t, Cell):
            raise PrologError("arithmetic: unbound variable")
        if isinstance(t, Atom):
            raise PrologError(f"arithmetic: unknown constant {t.name}")
        if isinstance(t, Struct):
            a = self.eval_arith(t.args[0])
            if len(t.args) == 1:
                return _UNARY.get(t.name, _no_op(t.name))(a)
            if len(t.args) == 2:
                b = self.eval_arith(t.args[1])
                return _BINARY.get(t.name, _no_op(t.name))(a, b)
        raise PrologError(f"arithmetic: bad expression {t!r}")

    # -- queries ----------------------------------------------------------

    def run_query(self, goal_ast: Term, limit: int | None = None) -> list[dict[str, str]]:
        """Solve, returning one dict of canonical binding text per answer.
        Unbound answer variables are numbered per answer, so answers are
        comparable modulo renaming."""
        ctx = self.ctx
        env: dict = {}
        g = instantiate(goal_ast, env, ctx)
        qvars = [(n, c) for n, c in env.items() if not n.startswith("_")]
        token = object()
        answers: list[dict[str, str]] = []
        mark = ctx.mark()
        gen = self.solve(g, token)
        try:
            while True:
                next(gen)
                names: dict = {}
                answers.append({n: format_term(reify(c, names)) for n, c in qvars})
                if limit is not None and len(answers) >= limit:
                    gen.close()
                    break
        except StopIteration:
            pass
        except _Cut as e:
            if e.token is not token:
                raise
        ctx.undo(mark)
        return answers

    def output(self) -> str:
        return "".join(self.ctx.out)


def _no_op(name: str):
    def f(*_a):
        raise PrologError(f"arithmetic: unknown operator {name}")

    return f


def _intdiv(a, b):
    if b == 0:
        raise PrologError("arithmetic: division by zero")
    return math.trunc(a / b) if (a or b) else 0


def _mod(a, b):
    if b == 0:
        raise PrologError("arithmetic: division by zero")
    return a - b * math.floor(a / b)


_UNARY = {
    "-": lambda a: -a,
    "+": lambda a: a,
    "abs": abs,
    "sign": lambda a: (a > 0) - (a < 0),
    "sqrt": math.sqrt,
    "sin": math.sin,
    "cos": math.cos,
    "truncate": math.trunc,
    "float": float,
}

_BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b if b != 0 else _intdiv(a, 0),
    "//": _intdiv,
    "mod": _mod,
    "rem": lambda a, b: a - b * _intdiv(a, b),
    "min": min,
    "max": max,
    "**": lambda a, b: a**b,
    "^": lambda a, b: a**b,
    ">>": lambda a, b: a >> b,
    "<<": lambda a, b: a << b,
}


def _num(v) -> Term:
    if isinstance(v, float) and v.is_integer() and abs(v) < 2**53:
        v = int(v)
    return Int(v) if isinstance(v, int) else Float(v)


# -- builtin predicates ---------------------------------------------------


def _bi_unify(ip: Interp, args):
    mark = ip.ctx.mark()
    if unify(ip.ctx, args[0], args[1]):
        yield
    ip.ctx.undo(mark)


def _bi_not_unifiable(ip: Interp, args):
    mark = ip.ctx.mark()
    ok = unify(ip.ctx, args[0], args[1])
    ip.ctx.undo(mark)
    if not ok:
        yield


def _order_class(t) -> int:
    if isinstance(t, Cell):
        return 0
    if isinstance(t, (Int, Float)):
        return 1
    if isinstance(t, Str):
        return 2
    if isinstance(t, Atom):
        return 3
    return 4


def term_compare(a, b) -> int:
    """Standard order: Var < Num < String < Atom < Compound."""
    a, b = deref(a), deref(b)
    ca, cb = _order_class(a), _order_class(b)
    if ca != cb:
        return -1 if ca < cb else 1
    if ca == 0:
        return (a.ts > b.ts) - (a.ts < b.ts)
    if ca == 1:
        return (a.value > b.value) - (a.value < b.value)
    if ca == 2:
        return (a.text > b.text) - (a.text < b.text)
    if ca == 3:
        return (a.name > b.name) - (a.name < b.name)
    if len(a.args) != len(b.args):
        return -1 if len(a.args) < len(b.args) else 1
    if a.name != b.name:
        return -1 if a.name < b.name else 1
    for x, y in zip(a.args, b.args):
        c = term_compare(x, y)
        if c:
            return c
    return 0


def _bi_eq(ip, args):
    if term_compare(args[0], args[1]) == 0:
        yield


def _bi_neq(ip, args):
    if term_compare(args[0], args[1]) != 0:
        yield


def _bi_compare(ip, args):
    c = term_compare(args[1], args[2])
    sym = Atom("<" if c < 0 else ">" if c > 0 else "=")
    yield from _bi_unify(ip, [args[0], sym])


def _bi_var(ip, args):
    if isinstance(deref(args[0]), Cell):
        yield


def _bi_nonvar(ip, args):
    if not isinstance(deref(args[0]), Cell):
        yield


def _bi_atom(ip, args):
    if isinstance(deref(args[0]), Atom):
        yield


def _bi_number(ip, args):
    if isinstance(deref(args[0]), (Int, Float)):
        yield


def _bi_is(ip, args):
    v = ip.eval_arith(args[1])
    yield from _bi_unify(ip, [args[0], _num(v)])


def _cmp(op):
    def f(ip, args):
        a = ip.eval_arith(args[0])
        b = ip.eval_arith(args[1])
        if op(a, b):
            yield

    return f


def _bi_functor(ip, args):
    t = deref(args[0])
    if isinstance(t, Cell):
        name = deref(args[1])
        arity = deref(args[2])
        if not isinstance(arity, Int):
            raise PrologError("functor/3: arity must be an integer")
        if arity.value == 0:
            yield from _bi_unify(ip, [t, name])
            return
        if not isinstance(name, Atom):
            raise PrologError("functor/3: name must be an atom")
        s = Struct(name.name, [ip.ctx.newvar() for _ in range(arity.value)])
        yield from _bi_unify(ip, [t, s])
        return
    if isinstance(t, Struct):
        name, arity = Atom(t.name), Int(len(t.args))
    else:
        name, arity = t, Int(0)
    mark = ip.ctx.mark()
    if unify(ip.ctx, args[1], name) and unify(ip.ctx, args[2], arity):
        yield
    ip.ctx.undo(mark)


def _bi_arg(ip, args):
    n = deref(args[0])
    t = deref(args[1])
    if not isinstance(t, Struct):
        raise PrologError("arg/3: second argument must be compound")
    if isinstance(n, Int):
        if 1 <= n.value <= len(t.args):
            yield from _bi_unify(ip, [args[2], t.args[n.value - 1]])
        return
    for i, a in enumerate(t.args):
        mark = ip.ctx.mark()
        if unify(ip.ctx, n, Int(i + 1)) and unify(ip.ctx, args[2], a):
            yield
        ip.ctx.undo(mark)


def _bi_univ(ip, args):
    t = deref(args[0])
    if isinstance(t, Struct):
        lst = _mk_rlist([Atom(t.name)] + list(t.args))
        yield from _bi_unify(ip, [args[1], lst])
        return
    if not isinstance(t, Cell):
        yield from _bi_unify(ip, [args[1], _mk_rlist([t])])
        return
    items = _rlist_items(deref(args[1]))
    if items is None or not items:
        raise PrologError("=../2: bad list")
    head = deref(items[0])
    if len(items) == 1:
        yield from _bi_unify(ip, [t, head])
        return
    if not isinstance(head, Atom):
        raise PrologError("=../2: functor must be an atom")
    yield from _bi_unify(ip, [t, Struct(head.name, items[1:])])


def _mk_rlist(items):
    out = NIL
    for x in reversed(items):
        out = Struct(".", [x, out])
    return out


def _rlist_items(t):
    items = []
    t = deref(t)
    while isinstance(t, Struct) and t.name == "." and len(t.args) == 2:
        items.append(t.args[0])
        t = deref(t.args[1])
    if isinstance(t, Atom) and t.name == "[]":
        return items
    return None


def _bi_between(ip, args):
    lo = ip.eval_arith(args[0])
    hi = ip.eval_arith(args[1])
    x = deref(args[2])
    if isinstance(x, (Int, Float)):
        if lo <= x.value <= hi:
            yield
        return
    i = lo
    while i <= hi:
        mark = ip.ctx.mark()
        if unify(ip.ctx, x, Int(i)):
            yield
        ip.ctx.undo(mark)
        i += 1


def _bi_write(ip, args):
    ip.ctx.out.append(format_term(reify(args[0])))
    yield


def _bi_nl(ip, args):
    ip.ctx.out.append("\n")
    yield


def _bi_copy(ip, args):
    mapping: dict = {}

    def cp(t):
        t = deref(t)
        if isinstance(t, Cell):
            c = mapping.get(id(t))
            if c is None:
                c = ip.ctx.newvar()
                mapping[id(t)] = c
            return c
        if isinstance(t, Struct):
            return Struct(t.name, [cp(a) for a in t.args])
        return t

    yield from _bi_unify(ip, [args[1], cp(args[0])])


def _bi_true(ip, args):
    yield


def _bi_fail(ip, args):
    return
    yield


def _bi_halt(ip, args):
    raise HaltSignal(0)
    yield


_BUILTINS = {
    ("=", 2): _bi_unify,
    ("\\=", 2): _bi_not_unifiable,
    ("==", 2): _bi_eq,
    ("\\==", 2): _bi_neq,
    ("compare", 3): _bi_compare,
    ("var", 1): _bi_var,
    ("nonvar", 1): _bi_nonvar,
    ("atom", 1): _bi_atom,
    ("number", 1): _bi_number,
    ("is", 2): _bi_is,
    ("<", 2): _cmp(lambda a, b: a < b),
    (">", 2): _cmp(lambda a, b: a > b),
    ("=<", 2): _cmp(lambda a, b: a <= b),
    (">=", 2): _cmp(lambda a, b: a >= b),
    ("=:=", 2): _cmp(lambda a, b: a == b),
    ("=\\=", 2): _cmp(lambda a, b: a != b),
    ("functor", 3): _bi_functor,
    ("arg", 3): _bi_arg,
    ("=..", 2): _bi_univ,
    ("between", 3): _bi_between,
    ("write", 1): _bi_write,
    ("nl", 0): _bi_nl,
    ("copy_term", 2): _bi_copy,
    ("true", 0): _bi_true,
    ("fail", 0): _bi_fail,
    ("false", 0): _bi_fail,
    ("halt", 0): _bi_halt,
}


def split_clause(t: Term) -> tuple[Term, Term]:
    if isinstance(t, Compound) and t.name == ":-" and len(t.args) == 2:
        return t.args[0], t.args[1]
    return t, Atom("true")


def run_query(source: str, goal: str, limit: int | None = None,
              out: list[str] | None = None) -> list[dict[str, str]]:
    """Read SOURCE as an implicit module, solve GOAL, return binding dicts."""
    from .parser import parse_term_text, read_module

    mod = read_module(source, name_hint="user")
    it = Interp.from_clauses(mod.clauses)
    answers = it.run_query(parse_term_text(goal + " ."), limit=limit)
    if out is not None:
        out.extend(it.ctx.out)
    return answers
