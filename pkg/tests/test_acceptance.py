"""Acceptance gate: normalization equivalence, golden emission, IR
invariants, and FFI compile checks."""

import itertools
import os
import random
import shutil
import subprocess
import time

import pytest

from pljs import codegen as cg
from pljs.emitter import abi_ok, emit_loader, emit_program
from pljs.errors import CompileError, FfiError
from pljs.interp import Interp
from pljs.normalize import normalize_module
from pljs.parser import read_module
from pljs.resolve import resolve_modules
from pljs.terms import Atom, Compound, Var, mk

HERE = os.path.dirname(__file__)
GOLDEN = os.path.join(HERE, "fixtures", "golden")
NEGATIVE = os.path.join(HERE, "fixtures", "negative")

HAVE_NODE = shutil.which("node") is not None


# -- 1. normalization equivalence ----------------------------------------

CONSTS = [Atom("a"), Atom("b"), Atom("c")]


def _random_goal(rng, callees, headvar, depth):
    if depth == 0 or rng.random() < 0.45:
        kind = rng.randrange(4)
        if kind == 0 and callees:
            name, arity = rng.choice(callees)
            args = tuple(rng.choice(CONSTS + [headvar]) for _ in range(arity))
            return mk(name, *args) if args else Atom(name)
        if kind == 1:
            return mk("=", headvar, rng.choice(CONSTS))
        if kind == 2:
            return Atom("true")
        return Atom("fail")
    op = rng.choice([",", ";", "->", "\\+"])
    if op == "\\+":
        return mk("\\+", _random_goal(rng, callees, headvar, depth - 1))
    if op == "->":
        return mk(";", mk("->", _random_goal(rng, callees, headvar, depth - 1),
                          _random_goal(rng, callees, headvar, depth - 1)),
                  _random_goal(rng, callees, headvar, depth - 1))
    return mk(op, _random_goal(rng, callees, headvar, depth - 1),
              _random_goal(rng, callees, headvar, depth - 1))


def _random_program(rng):
    npreds = rng.randrange(2, 7)
    clauses = []
    sigs = []
    for i in range(npreds):
        name, arity = f"p{i}", rng.randrange(0, 2)
        for _ in range(rng.randrange(1, 4)):
            hv = Var("X")
            head = mk(name, rng.choice(CONSTS + [hv])) if arity else Atom(name)
            if rng.random() < 0.4:
                clauses.append((head, Atom("true")))
            else:
                clauses.append((head, _random_goal(rng, sigs, hv, 4)))
        sigs.append((name, arity))
    return clauses, sigs


def _answers(interp, name, arity):
    goal = mk(name, Var("Q")) if arity else Atom(name)
    return sorted(repr(d) for d in interp.run_query(goal, limit=500))


def test_normalization_equivalence():
    rng = random.Random(20120901)
    t0 = time.monotonic()
    for _ in range(200):
        clauses, sigs = _random_program(rng)
        before = Interp.from_clauses(clauses)
        after = Interp.from_plain(normalize_module(clauses))
        for name, arity in sigs:
            assert _answers(before, name, arity) == _answers(after, name, arity), (
                clauses, name)
    assert time.monotonic() - t0 < 60.0


# -- 2. golden emission ---------------------------------------------------

def _golden_program():
    names = ["lists", "even", "odd", "ui", "main"]
    mods = []
    for n in names:
        with open(os.path.join(GOLDEN, "src", f"{n}.pl"), encoding="utf-8") as fh:
            mods.append(read_module(fh.read(), name_hint=n))
    return resolve_modules(mods)


def test_golden_emission_byte_identical():
    ems = emit_program(_golden_program())
    assert len(ems) == 5
    for em in ems:
        with open(os.path.join(GOLDEN, "out", f"{em.module_name}.js"), "rb") as fh:
            assert em.source.encode() == fh.read(), em.module_name
    with open(os.path.join(GOLDEN, "out", "loader.js"), "rb") as fh:
        assert emit_loader(ems).encode() == fh.read()


def test_golden_abi_closure():
    for em in emit_program(_golden_program()):
        assert abi_ok(em), em.module_name


@pytest.mark.skipif(not HAVE_NODE, reason="node not installed")
def test_golden_parses_under_host_engine():
    for em in emit_program(_golden_program()):
        r = subprocess.run(["node", "--check", "-"], input=em.source,
                           capture_output=True, text=True)
        assert r.returncode == 0, (em.module_name, r.stderr)


# -- 3. IR invariants, exhaustively ---------------------------------------

HEAD_ARGS = [Atom("a"), Atom("b"), Atom("c"), Var("V"), mk("f", Atom("a"))]


def _compile_db(heads, enable_index):
    src_clauses = [f"p({_arg_text(a)})." for a in heads]
    mod = read_module("\n".join(src_clauses) + "\n", name_hint="m")
    prog = resolve_modules([mod])
    return cg.compile_predicate(prog.modules["m"].preds[("p", 1)], enable_index)


def _arg_text(a):
    if isinstance(a, Var):
        return "_"
    if isinstance(a, Compound):
        return "f(a)"
    return a.name


def _key(a):
    if isinstance(a, Var):
        return None
    if isinstance(a, Compound):
        return "f/1"
    return f"{a.name}/0"


def test_ir_invariants_exhaustive():
    t0 = time.monotonic()
    checked = 0
    for n in range(1, 6):
        for heads in itertools.product(HEAD_ARGS, repeat=n):
            ir = _compile_db(heads, True)
            keys = [_key(a) for a in heads]
            if all(k is None for k in keys) or n < 2:
                assert isinstance(ir.selection, cg.Linear)
            else:
                sel = ir.selection
                assert isinstance(sel, cg.FirstArgSwitch)
                # the var bucket tries every clause, in order
                assert sel.var_bucket == list(range(n))
                # the default bucket is exactly the var-headed clauses
                assert sel.default == [i for i, k in enumerate(keys) if k is None]
                # each keyed bucket: clauses with that key or a var head,
                # source order preserved (indexing transparency)
                for k, bucket in sel.buckets.items():
                    assert bucket == [i for i, ki in enumerate(keys)
                                      if ki is None or ki == k]
                # no clause that could match a key is missing from its bucket
                for i, ki in enumerate(keys):
                    if ki is not None:
                        assert i in sel.buckets[ki]
            # chunk invariant: facts compile to one call-free chunk
            for cc in ir.clauses:
                assert len(cc.chunks) == 1 and cc.chunks[0].call is None
                assert not cc.needs_frame and cc.nframe == 0
            checked += 1
    assert checked == 5 + 25 + 125 + 625 + 3125
    assert time.monotonic() - t0 < 30.0


BODY_GOALS = ["q(X)", "r(X, Y)", "X = a", "Y is 1 + 2", "!"]
CALLS = {"q(X)", "r(X, Y)"}


def test_chunk_invariant_exhaustive():
    for n in range(0, 4):
        for body in itertools.product(BODY_GOALS, repeat=n):
            src = "p(X)" + (" :- " + ", ".join(body) if body else "") + ".\nq(_).\nr(_, _).\n"
            mod = read_module(src, name_hint="m")
            prog = resolve_modules([mod])
            ir = cg.compile_predicate(prog.modules["m"].preds[("p", 1)], True)
            cc = ir.clauses[0]
            ncalls = sum(1 for g in body if g in CALLS)
            trailing = 1 if ncalls and body[-1] not in CALLS else 0
            assert len(cc.chunks) == max(1, ncalls + trailing)
            for i, ch in enumerate(cc.chunks):
                last = i == len(cc.chunks) - 1
                assert ch.is_last == (last and ch.call is not None)
                if not last:
                    assert ch.call is not None
            assert cc.needs_frame == (len(cc.chunks) > 1)
            # frame slots are exactly the variables spanning chunks
            slots = _var_slots(cc)
            for name, (kinds, spans) in slots.items():
                assert (len(spans) > 1) == (kinds == {"Y"}), (src, name)
            # dump is stable
            assert cg.dump_ir(ir) == cg.dump_ir(ir)


def _var_slots(cc):
    out = {}

    def pat(p, ci):
        if isinstance(p, cg.PVar):
            kinds, spans = out.setdefault(p.name, (set(), set()))
            kinds.add("Y" if isinstance(p.slot, cg.FrameY) else "T")
            spans.add(ci)
        elif isinstance(p, cg.PStruct):
            for a in p.args:
                pat(a, ci)

    for ci, ch in enumerate(cc.chunks):
        for s in ch.steps:
            if isinstance(s, cg.GetArg):
                pat(s.pat, ci)
            elif isinstance(s, cg.BuiltinInline):
                for a in s.args:
                    pat(a, ci)
        if ch.call:
            for a in ch.call.args:
                pat(a, ci)
    return out


# -- 4. FFI compile checks ------------------------------------------------

HELLO = """\
:- module(hello, [main/0]).

:- pred document(-element) + js:foreign("return document;").

:- js:foreign_class element {
  :- pred body(-element) + js:foreign("return this.body;").
  :- pred set_innerHtml(+X) :: string + js:foreign("this.innerHtml=X;").
}.

main :- document(D), D:body(B), B:set_innerHtml("hello world").
"""


def test_ffi_hello_world_compiles():
    prog = resolve_modules([read_module(HELLO, name_hint="hello")])
    (em,) = emit_program(prog)
    assert '$r.def("hello"' in em.source
    assert '$r.def("element"' in em.source
    assert abi_ok(em)


@pytest.mark.skipif(not HAVE_NODE, reason="node not installed")
def test_ffi_hello_world_parses():
    prog = resolve_modules([read_module(HELLO, name_hint="hello")])
    (em,) = emit_program(prog)
    r = subprocess.run(["node", "--check", "-"], input=em.source,
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr


def _compile_fixture(name):
    with open(os.path.join(NEGATIVE, name), encoding="utf-8") as fh:
        mod = read_module(fh.read(), name_hint=name[:-3])
    emit_program(resolve_modules([mod]))


@pytest.mark.parametrize("fixture", [
    "unknown_receiver.pl",
    "use_before_bind.pl",
])
def test_receiver_inference_negative(fixture):
    with pytest.raises(FfiError):
        _compile_fixture(fixture)


@pytest.mark.parametrize("fixture", [
    "nondet_foreign.pl",
    "missing_body.pl",
])
def test_bad_declarations_negative(fixture):
    with pytest.raises(CompileError):
        _compile_fixture(fixture)
