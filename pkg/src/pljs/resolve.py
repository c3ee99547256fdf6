"""Module resolution: annotate every body goal with its defining module.

Lookup order is local predicates, then a unique importer of the name/arity,
then built-ins.  Unresolvable goals warn and compile to failing stubs;
a goal importable from two modules is an ambiguity error.

Foreign classes become synthetic modules named after the class, holding the
method stub predicates (receiver prepended, so arity is declared + 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ffi as ffimod
from .errors import ResolveError
from .ffi import BUILTIN_TYPES, ForeignClassDecl, ForeignDecl
from .normalize import PlainClause, normalize_module
from .parser import ModuleAst
from .terms import Atom, Compound, Term, Var, format_term

BUILTIN_MODULE: dict[tuple[str, int], str] = {}
for _k in [
    ("=", 2), ("\\=", 2), ("==", 2), ("\\==", 2), ("compare", 3),
    ("@<", 2), ("@>", 2), ("@=<", 2), ("@>=", 2),
    ("var", 1), ("nonvar", 1), ("atom", 1), ("number", 1),
    ("functor", 3), ("arg", 3), ("=..", 2),
    ("call", 1), ("call", 2), ("call", 3),
    ("true", 0), ("fail", 0), ("false", 0), ("halt", 0), ("copy_term", 2),
]:
    BUILTIN_MODULE[_k] = "term_basic"
for _k in [
    ("is", 2), ("<", 2), (">", 2), ("=<", 2), (">=", 2),
    ("=:=", 2), ("=\\=", 2), ("between", 3),
]:
    BUILTIN_MODULE[_k] = "arithmetic"
for _k in [("write", 1), ("nl", 0)]:
    BUILTIN_MODULE[_k] = "io"
for _k in [("put_attr", 3), ("get_attr", 3), ("del_attr", 2)]:
    BUILTIN_MODULE[_k] = "attr"
BUILTIN_MODULE[("freeze", 2)] = "freeze"

# built-ins compiled inline by codegen rather than called
INLINE_BUILTINS = {
    ("=", 2), ("is", 2), ("<", 2), (">", 2), ("=<", 2), (">=", 2),
    ("=:=", 2), ("=\\=", 2), ("var", 1), ("nonvar", 1),
    ("true", 0), ("fail", 0), ("false", 0),
}


@dataclass
class Goal:
    module: str  # defining module; '$cut' for !
    term: Term  # Atom or Compound (qualifier stripped)


@dataclass
class RClause:
    head: Term
    body: list[Goal]
    aux: bool = False


@dataclass
class RPred:
    module: str
    name: str
    arity: int
    clauses: list[RClause] = field(default_factory=list)
    foreign: ForeignDecl | None = None
    exported: bool = False

    @property
    def key(self) -> tuple[str, int]:
        return (self.name, self.arity)


@dataclass
class RModule:
    name: str
    exports: list[tuple[str, int]]
    imports: list[str]
    preds: dict[tuple[str, int], RPred] = field(default_factory=dict)
    deps: list[str] = field(default_factory=list)  # modules referenced by calls
    synthetic: bool = False  # foreign-class module
    host: str | None = None  # module whose source declared this foreign class

    def dep(self, m: str) -> None:
        if m != self.name and m not in self.deps:
            self.deps.append(m)


@dataclass
class Program:
    modules: dict[str, RModule]
    warnings: list[str] = field(default_factory=list)
    foreign_classes: dict[str, ForeignClassDecl] = field(default_factory=dict)


def _goal_key(t: Term) -> tuple[str, int]:
    if isinstance(t, Compound):
        return (t.name, len(t.args))
    assert isinstance(t, Atom)
    return (t.name, 0)


def resolve_modules(mods: list[ModuleAst]) -> Program:
    prog = Program(modules={})
    for m in mods:
        prog.warnings.extend(f"{m.name}: {w}" for w in m.warnings)

    # pass 1: register modules, their definitions, and foreign-class modules
    plain: dict[str, list[PlainClause]] = {}
    for m in mods:
        if m.name in prog.modules:
            raise ResolveError(f"duplicate module {m.name}")
        rm = RModule(m.name, list(m.exports), [im for im, _ in m.imports])
        prog.modules[m.name] = rm
        plain[m.name] = normalize_module(m.clauses)
        for pc in plain[m.name]:
            key = pc.key
            p = rm.preds.get(key)
            if p is None:
                p = RPred(m.name, key[0], key[1])
                rm.preds[key] = p
        for d in m.foreign_decls:
            if isinstance(d, ForeignClassDecl):
                if d.name in prog.modules:
                    raise ResolveError(f"foreign_class {d.name} clashes with module {d.name}")
                cm = RModule(d.name, d.export_keys(), [], synthetic=True, host=m.name)
                for meth in d.methods:
                    key = (meth.name, meth.stub_arity)
                    cm.preds[key] = RPred(d.name, key[0], key[1], foreign=meth)
                prog.modules[d.name] = cm
                prog.foreign_classes[d.name] = d
            else:
                key = (d.name, d.stub_arity)
                rm = prog.modules[m.name]
                if key in rm.preds:
                    raise ResolveError(f"{m.name}: {key[0]}/{key[1]} defined both as clauses and foreign")
                rm.preds[key] = RPred(m.name, key[0], key[1], foreign=d)

    # pass 2: check exports, then resolve bodies
    for m in mods:
        rm = prog.modules[m.name]
        for key in rm.exports:
            if key not in rm.preds:
                raise ResolveError(f"{m.name}: exported {key[0]}/{key[1]} is not defined")
        for p in rm.preds.values():
            p.exported = p.key in rm.exports or not m.explicit_module
    for cm in prog.modules.values():
        if cm.synthetic:
            for p in cm.preds.values():
                p.exported = True

    for m in mods:
        _resolve_module(prog, m, plain[m.name])
    return prog


def _import_map(prog: Program, m: ModuleAst) -> list[tuple[str, object]]:
    out = []
    for name, spec in m.imports:
        if name not in prog.modules:
            prog.warnings.append(f"{m.name}: imported module {name} is not part of this program")
            continue
        out.append((name, spec))
    return out


def _visible(prog: Program, imod: str, spec, key: tuple[str, int]) -> bool:
    rm = prog.modules[imod]
    if key not in rm.exports:
        return False
    return spec == "all" or key in spec


def _resolve_module(prog: Program, m: ModuleAst, clauses: list[PlainClause]) -> None:
    rm = prog.modules[m.name]
    imports = _import_map(prog, m)

    for pc in clauses:
        typeenv: dict[str, str] = {}
        body: list[Goal] = []
        for g in pc.body:
            body.append(_resolve_goal(prog, rm, imports, g, typeenv))
        rm.preds[pc.key].clauses.append(RClause(pc.head, body, pc.aux))

    # foreign '-class' outputs at module level register their classes as deps
    for p in rm.preds.values():
        if p.foreign is not None:
            for _, cls in p.foreign.out_classes():
                if cls in prog.modules:
                    rm.dep(cls)


def _note_out_classes(prog: Program, goal: Term, decl: ForeignDecl, typeenv: dict[str, str]) -> None:
    args = goal.args if isinstance(goal, Compound) else ()
    for idx, cls in decl.out_classes():
        if idx < len(args) and isinstance(args[idx], Var):
            typeenv[args[idx].name] = cls


def _resolve_goal(
    prog: Program,
    rm: RModule,
    imports: list[tuple[str, object]],
    g: Term,
    typeenv: dict[str, str],
) -> Goal:
    if isinstance(g, Atom) and g.name == "!":
        return Goal("$cut", g)
    if isinstance(g, Compound) and g.name == ":" and len(g.args) == 2:
        qual, inner = g.args
        if isinstance(qual, Var):
            g = ffimod.resolve_method_call(g, typeenv)
            qual, inner = g.args
        if not isinstance(qual, Atom):
            raise ResolveError(f"{rm.name}: bad module qualifier in {format_term(g)}")
        mq = qual.name
        key = _goal_key(inner)
        target = prog.modules.get(mq)
        if target is not None:
            if key in target.preds and (key in target.exports or mq == rm.name):
                p = target.preds[key]
                if p.foreign is not None:
                    _note_out_classes(prog, inner, p.foreign, typeenv)
                rm.dep(mq)
                return Goal(mq, inner)
            prog.warnings.append(
                f"{rm.name}: {mq}:{key[0]}/{key[1]} is not exported by {mq}; compiled to failing stub"
            )
            return _stub(rm, key, inner)
        if BUILTIN_MODULE.get(key) == mq:
            rm.dep(mq)
            return Goal(mq, inner)
        prog.warnings.append(
            f"{rm.name}: unknown module {mq} in qualified goal; compiled to failing stub"
        )
        return _stub(rm, key, inner)

    if not isinstance(g, (Atom, Compound)):
        raise ResolveError(f"{rm.name}: goal is not callable: {format_term(g)}")
    key = _goal_key(g)

    if key in rm.preds:
        p = rm.preds[key]
        if p.foreign is not None:
            _note_out_classes(prog, g, p.foreign, typeenv)
        return Goal(rm.name, g)

    candidates = [im for im, spec in imports if _visible(prog, im, spec, key)]
    if len(candidates) > 1:
        raise ResolveError(
            f"{rm.name}: {key[0]}/{key[1]} is imported from both "
            f"{candidates[0]} and {candidates[1]}; qualify the call"
        )
    if candidates:
        target = prog.modules[candidates[0]]
        p = target.preds[key]
        if p.foreign is not None:
            _note_out_classes(prog, g, p.foreign, typeenv)
        rm.dep(candidates[0])
        return Goal(candidates[0], g)

    bm = BUILTIN_MODULE.get(key)
    if bm is not None:
        rm.dep(bm)
        return Goal(bm, g)

    prog.warnings.append(
        f"{rm.name}: unknown predicate {key[0]}/{key[1]}; compiled to failing stub"
    )
    return _stub(rm, key, g)


def _stub(rm: RModule, key: tuple[str, int], g: Term) -> Goal:
    if key not in rm.preds:
        rm.preds[key] = RPred(rm.name, key[0], key[1])
    return Goal(rm.name, g)
