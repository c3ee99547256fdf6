"""Foreign declarations: `:- pred ... + js:foreign("...")` assertions and
`:- js:foreign_class name { ... }.` blocks.

A foreign class defines a wrapper term kind for host objects; its methods
become predicates of a module named after the class, with the receiver
prepended as first argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FfiError
from .terms import Atom, Compound, Str, Term, Var

BUILTIN_TYPES = ("number", "string", "atom", "term")


@dataclass
class ForeignArg:
    mode: str  # '+' or '-'
    type: str  # number | string | atom | term | <class name>
    name: str  # JS parameter name for '+' arguments


@dataclass
class ForeignDecl:
    name: str
    arity: int
    args: list[ForeignArg]
    body: str
    is_method: bool = False
    class_name: str | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def stub_arity(self) -> int:
        """Arity of the emitted stub predicate (receiver included)."""
        return self.arity + 1 if self.is_method else self.arity

    def export_keys(self) -> list[tuple[str, int]]:
        return [(self.name, self.stub_arity)]

    def out_classes(self) -> list[tuple[int, str]]:
        """(stub argument index, class) for '-' outputs of foreign-class type."""
        base = 1 if self.is_method else 0
        return [
            (base + i, a.type)
            for i, a in enumerate(self.args)
            if a.mode == "-" and a.type not in BUILTIN_TYPES
        ]


@dataclass
class ForeignClassDecl:
    name: str
    methods: list[ForeignDecl]

    def export_keys(self) -> list[tuple[str, int]]:
        out = []
        for m in self.methods:
            out.extend(m.export_keys())
        return out


def _flatten_chain(t: Term, op: str) -> list[Term]:
    # left-assoc chain  a op b op c  ->  [a, b, c]
    out: list[Term] = []
    while isinstance(t, Compound) and t.name == op and len(t.args) == 2:
        out.insert(0, t.args[1])
        t = t.args[0]
    out.insert(0, t)
    return out


def parse_foreign_decl(directive: Term) -> ForeignDecl:
    """Parse a `pred Head [:: Types] + Prop + ...` assertion directive."""
    if not (isinstance(directive, Compound) and directive.name == "pred" and len(directive.args) == 1):
        raise FfiError("not a pred assertion")
    parts = _flatten_chain(directive.args[0], "+")
    spec, props = parts[0], parts[1:]
    types: list[Term] = []
    if isinstance(spec, Compound) and spec.name == "::" and len(spec.args) == 2:
        # `::` binds looser than `+`, so properties can end up on its right
        head = spec.args[0]
        rhs = _flatten_chain(spec.args[1], "+")
        types = _flatten_chain(rhs[0], "*")
        props = rhs[1:] + props
    else:
        head = spec

    if not isinstance(head, (Atom, Compound)):
        raise FfiError("pred assertion head must be callable")
    name = head.name
    raw_args = list(head.args) if isinstance(head, Compound) else []

    body: str | None = None
    deterministic = True
    warnings: list[str] = []
    for p in props:
        if (
            isinstance(p, Compound)
            and p.name == ":"
            and isinstance(p.args[0], Atom)
            and p.args[0].name == "js"
            and isinstance(p.args[1], Compound)
            and p.args[1].name == "foreign"
            and len(p.args[1].args) == 1
        ):
            text = p.args[1].args[0]
            if not isinstance(text, Str):
                raise FfiError(f"{name}: non-text js:foreign body")
            body = text.text
            continue
        if isinstance(p, Atom) and p.name == "is_det":
            continue
        if isinstance(p, Atom) and p.name in ("nondet", "non_det", "multi"):
            raise FfiError(f"{name}: nondeterministic foreign code is not supported")
        warnings.append(f"{name}: ignored assertion property {p}")
    if body is None:
        raise FfiError(f"{name}: pred assertion lacks a js:foreign body")

    args: list[ForeignArg] = []
    tq = list(types)
    for i, a in enumerate(raw_args):
        mode = "+"
        inner = a
        if isinstance(a, Compound) and a.name in ("+", "-") and len(a.args) == 1:
            mode = a.name
            inner = a.args[0]
        else:
            warnings.append(f"{name}: argument {i + 1} has no mode, assuming '+'")
        if isinstance(inner, Atom):
            typ = inner.name
            argname = f"A{i}"
        elif isinstance(inner, Var):
            typ = None
            argname = inner.name
        else:
            raise FfiError(f"{name}: bad argument specification {inner}")
        if typ is None:
            if tq:
                tt = tq.pop(0)
                if not isinstance(tt, Atom):
                    raise FfiError(f"{name}: bad '::' type {tt}")
                typ = tt.name
            else:
                typ = "term"
        args.append(ForeignArg(mode, typ, argname))

    return ForeignDecl(name=name, arity=len(args), args=args, body=body, warnings=warnings)


def parse_foreign_class(name: str, method_terms: list[Term], mod=None) -> ForeignClassDecl:
    methods = []
    for t in method_terms:
        d = parse_foreign_decl(t)
        d.is_method = True
        d.class_name = name
        methods.append(d)
    return ForeignClassDecl(name=name, methods=methods)


def resolve_method_call(goal: Term, typeenv: dict[str, str]) -> Term:
    """Rewrite `Obj:Method(Args...)` to `class:method(Obj, Args...)`.

    typeenv maps variable names to their statically known foreign class,
    propagated from '-class' outputs earlier in the same clause.
    """
    assert isinstance(goal, Compound) and goal.name == ":" and len(goal.args) == 2
    recv, meth = goal.args
    if not isinstance(recv, Var):
        raise FfiError(f"method call receiver must be a variable: {goal}")
    cls = typeenv.get(recv.name)
    if cls is None:
        raise FfiError(f"receiver class of {recv.name} is not statically known in {goal}")
    if isinstance(meth, Atom):
        call = Compound(meth.name, (recv,))
    elif isinstance(meth, Compound):
        call = Compound(meth.name, (recv,) + meth.args)
    else:
        raise FfiError(f"bad method call {goal}")
    return Compound(":", (Atom(cls), call))
