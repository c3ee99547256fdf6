"""Serialize chunked IR into ES5 JavaScript modules.

Every emitted file is a plain script sharing one root symbol `$r`.  A module
is a single `$r.def` whose closure declares placeholder variables for every
class it needs (its own predicate and functor classes, imported predicate
classes, primitive term constructors), defines nested symbols for each
predicate and functor, assigns its export table eagerly, and installs a
`link` thunk that prepares imported module symbols and captures their
constructors into the placeholders.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from . import codegen as cg
from .errors import EmitError
from .ffi import ForeignDecl
from .resolve import Program, RModule, RPred

PRIMITIVES = {"$tv": "t_var", "$tn": "t_num", "$ts": "t_string"}
STRUCT_BASE = "t_struct"

_CMP_OPS = {"<": "<", ">": ">", "=<": "<=", ">=": ">=", "=:=": "===", "=\\=": "!=="}


@dataclass
class EmittedModule:
    module_name: str
    source: str
    deps: list[str]
    foreign_bodies: list[str] = field(default_factory=list)


def mangle(name: str, arity: int) -> str:
    return f"{name}/{arity}"


def sanitize(name: str) -> str:
    s = re.sub(r"[^A-Za-z0-9_]", "_", name)
    if not s or s[0].isdigit():
        s = "_" + s
    return s


def _js_str(s: str) -> str:
    return json.dumps(s)


def _js_num(v: int | float) -> str:
    return repr(v)


class _Lines:
    def __init__(self) -> None:
        self.out: list[str] = []
        self.depth = 0

    def w(self, line: str = "") -> None:
        self.out.append(("  " * self.depth + line) if line else "")

    def text(self) -> str:
        return "\n".join(self.out) + "\n"


class _ModuleEmitter:
    def __init__(self, rm: RModule, prog: Program, enable_index: bool) -> None:
        self.rm = rm
        self.prog = prog
        self.irs: dict[tuple[str, int], cg.PredIR] = {}
        for key, p in rm.preds.items():
            if p.foreign is None:
                self.irs[key] = cg.compile_predicate(p, enable_index)
        self._counter = 0
        self.local_ids: dict[tuple[str, int], str] = {}
        self.functor_ids: dict[tuple[str, int], str] = {}
        self.import_ids: dict[tuple[str, str, int], str] = {}
        self.prims: set[str] = set()
        self.foreign_bodies: list[str] = []
        self._allocate_names()

    # -- naming -----------------------------------------------------------

    def _new_id(self, base: str) -> str:
        ident = f"{sanitize(base)}_{self._counter}"
        self._counter += 1
        return ident

    def _allocate_names(self) -> None:
        for name, arity in self.rm.preds:
            self.local_ids[(name, arity)] = self._new_id(f"{name}_{arity}")
        for ir in self.irs.values():
            for name, arity in _needed_functors(ir):
                key = (name, arity)
                if key not in self.local_ids and key not in self.functor_ids:
                    self.functor_ids[key] = self._new_id(f"{name}_{arity}")
        for ir in self.irs.values():
            for call in _calls(ir):
                if call.module != self.rm.name:
                    key = (call.module, call.name, call.arity)
                    if key not in self.import_ids:
                        self.import_ids[key] = self._new_id(f"{call.name}_{call.arity}")
        for p in self.rm.preds.values():
            if p.foreign is not None:
                for t in _foreign_prims(p.foreign):
                    self.prims.add(t)

    def _class_ref(self, module: str, name: str, arity: int) -> str:
        if module == self.rm.name:
            key = (name, arity)
            ref = self.local_ids.get(key) or self.functor_ids.get(key)
            if ref is None:
                raise EmitError(f"{self.rm.name}: no class for {name}/{arity}")
            return ref
        return self.import_ids[(module, name, arity)]

    # -- whole module -----------------------------------------------------

    def emit(self) -> str:
        pred_blocks = [self._emit_pred(p) for p in self.rm.preds.values()]
        o = _Lines()
        o.w(f"$r.def({_js_str(self.rm.name)}, function (m) {{")
        o.depth += 1
        prim_vars = sorted(self.prims)
        if prim_vars:
            o.w("var " + ", ".join(prim_vars) + ";")
        placeholders = (
            list(self.local_ids.values())
            + list(self.functor_ids.values())
            + list(self.import_ids.values())
        )
        if placeholders:
            o.w("var " + ", ".join(placeholders) + ";")
        for key, ident in self.functor_ids.items():
            self._emit_functor_def(o, key, ident)
        for block in pred_blocks:
            o.out.extend(block)
        for name, arity in self._export_keys():
            k = _js_str(mangle(name, arity))
            o.w(f"m.exports[{k}] = m.query({k});")
        self._emit_link(o)
        o.depth -= 1
        o.w("});")
        return o.text()

    def _export_keys(self) -> list[tuple[str, int]]:
        if self.rm.exports:
            return list(self.rm.exports)
        return [p.key for p in self.rm.preds.values() if p.exported]

    def _emit_link(self, o: _Lines) -> None:
        imports: list[str] = []
        for mod, _, _ in self.import_ids:
            if mod not in imports:
                imports.append(mod)
        if not self.prims and not imports and not self.local_ids and not self.functor_ids:
            o.w("m.link = function () {};")
            return
        o.w("m.link = function () {")
        o.depth += 1
        for prim in sorted(self.prims):
            o.w(f"{prim} = $r.query({_js_str(PRIMITIVES[prim])}).prepare().ctor;")
        for key, ident in list(self.local_ids.items()) + list(self.functor_ids.items()):
            o.w(f"{ident} = m.query({_js_str(mangle(*key))}).ctor;")
        if imports:
            o.w("var p;")
        for mod in imports:
            o.w(f"p = $r.query({_js_str(mod)}).prepare();")
            for (m2, name, arity), ident in self.import_ids.items():
                if m2 == mod:
                    o.w(f"{ident} = p.exports[{_js_str(mangle(name, arity))}].ctor;")
        o.depth -= 1
        o.w("};")

    # -- nested symbol definitions ----------------------------------------

    def _def_header(self, o: _Lines, name: str, arity: int, ident: str) -> None:
        o.w(f"m.def({_js_str(mangle(name, arity))}, function ($m) {{")
        o.depth += 1
        params = ", ".join(f"a{i}" for i in range(arity))
        body = " ".join(f"this.a{i} = a{i};" for i in range(arity))
        o.w(f"function f({params}) {{{(' ' + body + ' ') if body else ''}}}")
        o.w("$m.ctor = f;")
        o.w(f"$m.base = $r.query({_js_str(STRUCT_BASE)});")
        o.w("$m.mlink = function ($c) {")
        o.depth += 1
        o.w(f"$c.prototype.name = {_js_str(name)};")
        o.w(f"$c.prototype.arity = {arity};")

    def _def_footer(self, o: _Lines) -> None:
        o.depth -= 1
        o.w("};")
        o.depth -= 1
        o.w("});")

    def _emit_functor_def(self, o: _Lines, key: tuple[str, int], ident: str) -> None:
        self._def_header(o, key[0], key[1], ident)
        self._def_footer(o)

    def _emit_pred(self, pred: RPred) -> list[str]:
        o = _Lines()
        o.depth = 1
        ident = self.local_ids[pred.key]
        self._def_header(o, pred.name, pred.arity, ident)
        if pred.foreign is not None:
            self._emit_foreign_execute(o, pred.foreign)
        else:
            self._emit_execute(o, self.irs[pred.key])
        self._def_footer(o)
        return o.out

    # -- predicate bodies -------------------------------------------------

    def _emit_execute(self, o: _Lines, ir: cg.PredIR) -> None:
        for i, cc in enumerate(ir.clauses):
            self._emit_clause(o, i, cc)
        n = len(ir.clauses)
        if n == 0:
            o.w("$c.prototype.execute = function (w) {")
            o.depth += 1
            o.w("return w.fail();")
            o.depth -= 1
            o.w("};")
            return
        names = [f"c{i}" for i in range(n)]
        if isinstance(ir.selection, cg.FirstArgSwitch):
            o.w("var all = [" + ", ".join(names) + "];")
            o.w("var sw = {};")
            for key, bucket in ir.selection.buckets.items():
                o.w(f"sw[{_js_str(key)}] = [" + ", ".join(names[i] for i in bucket) + "];")
            o.w("var dflt = [" + ", ".join(names[i] for i in ir.selection.default) + "];")
            o.w("$c.prototype.execute = function (w) {")
            o.depth += 1
            o.w("var ch0 = w.choice;")
            o.w("var k = w.key(this.a0.deref());")
            o.w("var cs = k === null ? all : sw.hasOwnProperty(k) ? sw[k] : dflt;")
            o.w("if (cs.length === 0) return w.fail();")
            o.w("if (cs.length > 1) w.pushChoice(cs, this);")
            o.w("return cs[0](w, this, ch0);")
            o.depth -= 1
            o.w("};")
        elif n == 1:
            o.w("$c.prototype.execute = function (w) {")
            o.depth += 1
            o.w("return c0(w, this, w.choice);")
            o.depth -= 1
            o.w("};")
        else:
            o.w("var all = [" + ", ".join(names) + "];")
            o.w("$c.prototype.execute = function (w) {")
            o.depth += 1
            o.w("var ch0 = w.choice;")
            o.w("w.pushChoice(all, this);")
            o.w("return all[0](w, this, ch0);")
            o.depth -= 1
            o.w("};")

    def _emit_clause(self, o: _Lines, idx: int, cc: cg.ClauseCode) -> None:
        o.w(f"function c{idx}(w, g, ch0) {{")
        o.depth += 1
        if cc.needs_frame:
            o.w(f"var F = w.pushFrame({cc.nframe});")
            if cc.saves_cut:
                o.w("F.cut = ch0;")
        temps = sorted(_clause_temps(cc))
        if temps:
            o.w("var " + ", ".join(f"t{i}" for i in temps) + ";")
        cut_ref = "F.cut" if cc.needs_frame and cc.saves_cut else "ch0"
        for j in range(1, len(cc.chunks)):
            o.w(f"function k{j}() {{")
            o.depth += 1
            self._emit_chunk(o, cc, j, cut_ref)
            o.depth -= 1
            o.w("}")
        self._emit_chunk(o, cc, 0, cut_ref)
        o.depth -= 1
        o.w("}")

    def _emit_chunk(self, o: _Lines, cc: cg.ClauseCode, j: int, cut_ref: str) -> None:
        chunk = cc.chunks[j]
        for step in chunk.steps:
            self._emit_step(o, step, cut_ref)
        call = chunk.call
        if call is None:
            if cc.needs_frame:
                o.w("w.frame = F.frame;")
                o.w("w.cont = F.cont;")
            o.w("return w.cont;")
            return
        goal = f"new {self._class_ref(call.module, call.name, call.arity)}(" + ", ".join(
            self._expr(a) for a in call.args
        ) + ")"
        if chunk.is_last:
            if cc.needs_frame:
                o.w(f"var g2 = {goal};")
                o.w("w.frame = F.frame;")
                o.w("w.cont = F.cont;")
                o.w("return g2;")
            else:
                o.w(f"return {goal};")
        else:
            o.w(f"w.cont = k{j + 1};")
            o.w(f"return {goal};")

    def _emit_step(self, o: _Lines, step, cut_ref: str) -> None:
        if isinstance(step, cg.GetArg):
            if isinstance(step.pat, cg.PVar) and step.pat.first:
                o.w(f"{_slot(step.pat.slot)} = g.a{step.index};")
            else:
                o.w(f"if (!w.unify(g.a{step.index}, {self._expr(step.pat)})) return w.fail();")
            return
        if isinstance(step, cg.CutStep):
            o.w(f"w.choice = {cut_ref};")
            return
        assert isinstance(step, cg.BuiltinInline)
        op, args = step.op, step.args
        if op == "true":
            return
        if op in ("fail", "false"):
            o.w("return w.fail();")
        elif op == "=":
            o.w(f"if (!w.unify({self._expr(args[0])}, {self._expr(args[1])})) return w.fail();")
        elif op == "is":
            self.prims.add("$tn")
            o.w(
                f"if (!w.unify({self._expr(args[0])}, new $tn(w.arith({self._expr(args[1])}))))"
                " return w.fail();"
            )
        elif op in _CMP_OPS:
            o.w(
                f"if (!(w.arith({self._expr(args[0])}) {_CMP_OPS[op]}"
                f" w.arith({self._expr(args[1])}))) return w.fail();"
            )
        elif op == "var":
            o.w(f"if (!w.isVar({self._expr(args[0])})) return w.fail();")
        elif op == "nonvar":
            o.w(f"if (w.isVar({self._expr(args[0])})) return w.fail();")
        else:
            raise EmitError(f"unknown inline builtin {op}")

    def _expr(self, pat) -> str:
        if isinstance(pat, cg.PVar):
            if pat.first:
                self.prims.add("$tv")
                return f"({_slot(pat.slot)} = new $tv())"
            return _slot(pat.slot)
        if isinstance(pat, cg.PConst):
            if pat.kind == "atom":
                return f"new {self._class_ref(self.rm.name, pat.value, 0)}()"
            if pat.kind == "str":
                self.prims.add("$ts")
                return f"new $ts({_js_str(pat.value)})"
            self.prims.add("$tn")
            return f"new $tn({_js_num(pat.value)})"
        assert isinstance(pat, cg.PStruct)
        cls = self._class_ref(self.rm.name, pat.name, len(pat.args))
        return f"new {cls}(" + ", ".join(self._expr(a) for a in pat.args) + ")"

    # -- foreign stubs ----------------------------------------------------

    def _emit_foreign_execute(self, o: _Lines, decl: ForeignDecl) -> None:
        outs = [(i, a) for i, a in enumerate(decl.args) if a.mode == "-"]
        if len(outs) > 1:
            raise EmitError(f"{decl.name}: more than one output argument")
        ins = [(i, a) for i, a in enumerate(decl.args) if a.mode == "+"]
        off = 1 if decl.is_method else 0
        params = ", ".join(a.name for _, a in ins)
        self.foreign_bodies.append(decl.body)
        o.w(f"function body({params}) {{{decl.body}}}")
        o.w("$c.prototype.execute = function (w) {")
        o.depth += 1
        recv = "this.a0.deref().unbox()" if decl.is_method else "null"
        vals = []
        for i, a in ins:
            slot = f"this.a{i + off}.deref()"
            vals.append(slot if a.type == "term" else slot + ".unbox()")
        call = f"body.call({recv}" + "".join(", " + v for v in vals) + ")"
        if not outs:
            o.w(f"{call};")
        else:
            i, a = outs[0]
            o.w(f"var r = {call};")
            o.w("if (r === undefined) return w.fail();")
            o.w(f"if (!w.unify(this.a{i + off}, {self._box('r', a.type)})) return w.fail();")
        o.w("return w.cont;")
        o.depth -= 1
        o.w("};")

    def _box(self, expr: str, typ: str) -> str:
        if typ == "number":
            self.prims.add("$tn")
            return f"new $tn({expr})"
        if typ == "string":
            self.prims.add("$ts")
            return f"new $ts({expr})"
        if typ == "atom":
            return f"w.atom({expr})"
        if typ == "term":
            return expr
        return f"w.box({expr})"


def _slot(slot: cg.Slot) -> str:
    if isinstance(slot, cg.FrameY):
        return f"F.y[{slot.index}]"
    return f"t{slot.index}"


def _clause_temps(cc: cg.ClauseCode):
    seen: set[int] = set()

    def walk(pat) -> None:
        if isinstance(pat, cg.PVar):
            if isinstance(pat.slot, cg.Temp):
                seen.add(pat.slot.index)
        elif isinstance(pat, cg.PStruct):
            for a in pat.args:
                walk(a)

    for chunk in cc.chunks:
        for step in chunk.steps:
            if isinstance(step, cg.GetArg):
                walk(step.pat)
            elif isinstance(step, cg.BuiltinInline):
                for a in step.args:
                    walk(a)
        if chunk.call is not None:
            for a in chunk.call.args:
                walk(a)
    return seen


def _calls(ir: cg.PredIR):
    for cc in ir.clauses:
        for chunk in cc.chunks:
            if chunk.call is not None:
                yield chunk.call


def _needed_functors(ir: cg.PredIR):
    out: list[tuple[str, int]] = []
    seen: set[tuple[str, int]] = set()

    def walk(pat) -> None:
        if isinstance(pat, cg.PConst):
            if pat.kind == "atom" and (pat.value, 0) not in seen:
                seen.add((pat.value, 0))
                out.append((pat.value, 0))
        elif isinstance(pat, cg.PStruct):
            key = (pat.name, len(pat.args))
            if key not in seen:
                seen.add(key)
                out.append(key)
            for a in pat.args:
                walk(a)

    for cc in ir.clauses:
        for chunk in cc.chunks:
            for step in chunk.steps:
                if isinstance(step, cg.GetArg):
                    walk(step.pat)
                elif isinstance(step, cg.BuiltinInline):
                    for a in step.args:
                        walk(a)
            if chunk.call is not None:
                for a in chunk.call.args:
                    walk(a)
    return out


def _foreign_prims(decl: ForeignDecl) -> list[str]:
    out = []
    for a in decl.args:
        if a.mode == "-" and a.type == "number":
            out.append("$tn")
        elif a.mode == "-" and a.type == "string":
            out.append("$ts")
    return out


# -- public entry points --------------------------------------------------


def emit_module(rm: RModule, prog: Program, enable_index: bool = True) -> EmittedModule:
    """Emit one resolved module (plus any foreign-class modules it hosts)."""
    em = _ModuleEmitter(rm, prog, enable_index)
    parts = [em.emit()]
    bodies = list(em.foreign_bodies)
    for cm in prog.modules.values():
        if cm.synthetic and cm.host == rm.name:
            sub = _ModuleEmitter(cm, prog, enable_index)
            parts.append(sub.emit())
            bodies.extend(sub.foreign_bodies)
    return EmittedModule(rm.name, "".join(parts), list(rm.deps), bodies)


def emit_program(prog: Program, enable_index: bool = True) -> list[EmittedModule]:
    return [
        emit_module(rm, prog, enable_index)
        for rm in prog.modules.values()
        if not rm.synthetic
    ]


def emit_loader(mods: list[EmittedModule], runtime: str = "runtime.js") -> str:
    """A convenience script listing files in dependency order; correctness
    must not depend on it."""
    order = _topo(mods)
    files = [runtime] + [f"{name}.js" for name in order]
    o = _Lines()
    o.w("var $load_order = [")
    o.depth += 1
    for f in files:
        o.w(f"{_js_str(f)},")
    o.depth -= 1
    o.w("];")
    return o.text()


def _topo(mods: list[EmittedModule]) -> list[str]:
    have = {m.module_name: m for m in mods}
    done: list[str] = []
    mark: set[str] = set()

    def visit(name: str) -> None:
        if name in mark or name not in have:
            return
        mark.add(name)
        for d in have[name].deps:
            visit(d)
        done.append(name)

    for m in mods:
        visit(m.module_name)
    return done


def emit_foreign_stub(decl: ForeignDecl) -> str:
    """Standalone stub fragment (the same code a module emission embeds)."""
    o = _Lines()
    shim = _ModuleEmitter.__new__(_ModuleEmitter)
    shim.prims = set()
    shim.foreign_bodies = []
    shim._emit_foreign_execute(o, decl)
    return o.text()


# -- ABI closure scan -----------------------------------------------------

_JS_KEYWORDS = {
    "var", "function", "return", "if", "else", "new", "typeof", "null",
    "true", "false", "in", "for", "while", "do", "this", "instanceof",
    "break", "continue", "switch", "case", "default", "throw", "try",
    "catch", "finally", "delete", "void", "undefined",
}

ES_BUILTINS = {
    "Object", "Array", "String", "Number", "Boolean", "Math", "JSON",
    "RegExp", "Date", "Error", "TypeError", "RangeError", "parseInt",
    "parseFloat", "isNaN", "isFinite", "NaN", "Infinity", "encodeURIComponent",
    "decodeURIComponent",
}


def referenced_globals(source: str, skip_bodies: list[str] | None = None) -> set[str]:
    """Free identifiers of an emitted file: all identifier references minus
    everything the file itself declares (functions, vars, parameters),
    property names, string contents, and JS keywords."""
    for b in skip_bodies or []:
        source = source.replace(b, "")
    source = re.sub(r'"(?:[^"\\]|\\.)*"', '""', source)
    declared: set[str] = set()
    for m in re.finditer(r"function\s*([A-Za-z_$][\w$]*)?\s*\(([^)]*)\)", source):
        if m.group(1):
            declared.add(m.group(1))
        for p in m.group(2).split(","):
            p = p.strip()
            if p:
                declared.add(p)
    for m in re.finditer(r"\bvar\s+([^;=]+)", source):
        for p in m.group(1).split(","):
            p = p.strip()
            if re.fullmatch(r"[A-Za-z_$][\w$]*", p):
                declared.add(p)
    refs: set[str] = set()
    for m in re.finditer(r"(\.\s*)?([A-Za-z_$][\w$]*)", source):
        if m.group(1):
            continue
        name = m.group(2)
        if name not in _JS_KEYWORDS:
            refs.add(name)
    return refs - declared


def abi_ok(em: EmittedModule) -> bool:
    extra = referenced_globals(em.source, em.foreign_bodies) - {"$r", "$s", "$extends"}
    return not (extra - ES_BUILTINS)
