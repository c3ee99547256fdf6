from pljs.codegen import (
    BuiltinInline,
    CutStep,
    FirstArgSwitch,
    FrameY,
    GetArg,
    Linear,
    PVar,
    Temp,
    compile_predicate,
    dump_ir,
)
from pljs.parser import read_module
from pljs.resolve import resolve_modules


def pred(src, name, arity, enable_index=True):
    mod = read_module(src, name_hint="m")
    prog = resolve_modules([mod])
    return compile_predicate(prog.modules["m"].preds[(name, arity)], enable_index)


def test_three_calls_three_chunks():
    ir = pred("p :- q, r, s.\nq. r. s.\n", "p", 0)
    cc = ir.clauses[0]
    assert len(cc.chunks) == 3
    assert [c.call.name for c in cc.chunks] == ["q", "r", "s"]
    assert [c.is_last for c in cc.chunks] == [False, False, True]
    assert cc.needs_frame


def test_var_crossing_chunks_gets_frame_slot():
    ir = pred("p(X) :- q(X), r(X).\nq(_). r(_).\n", "p", 1)
    cc = ir.clauses[0]
    assert cc.nframe == 1
    step = cc.chunks[0].steps[0]
    assert isinstance(step, GetArg) and isinstance(step.pat, PVar)
    assert step.pat.slot == FrameY(0) and step.pat.first


def test_single_chunk_inline_cut_no_frame():
    ir = pred("max(X,Y,X) :- X >= Y, !.\nmax(X,Y,Y) :- X < Y.\n", "max", 3)
    cc = ir.clauses[0]
    assert len(cc.chunks) == 1 and not cc.needs_frame and cc.saves_cut
    kinds = [type(s).__name__ for s in cc.chunks[0].steps]
    assert kinds == ["GetArg", "GetArg", "GetArg", "BuiltinInline", "CutStep"]
    assert all(isinstance(s.pat.slot, Temp) for s in cc.chunks[0].steps[:3]
               if isinstance(s, GetArg) and isinstance(s.pat, PVar))


def test_inline_builtins_do_not_end_chunks():
    ir = pred("p(X, Y) :- X = a, Y is 1 + 2, q(X).\nq(_).\n", "p", 2)
    assert len(ir.clauses[0].chunks) == 1


def test_append_switch():
    src = "append([], L, L).\nappend([X|Xs], Y, [X|Zs]) :- append(Xs, Y, Zs).\n"
    ir = pred(src, "append", 3)
    assert isinstance(ir.selection, FirstArgSwitch)
    assert ir.selection.buckets == {"[]/0": [0], "./2": [1]}
    assert ir.selection.var_bucket == [0, 1]
    assert ir.selection.default == []


def test_mixed_buckets_with_var_clause():
    src = "f(1).\nf(a).\nf(X) :- g(X).\ng(_).\n"
    ir = pred(src, "f", 1)
    assert ir.selection.buckets == {"N:1": [0, 2], "a/0": [1, 2]}
    assert ir.selection.var_bucket == [0, 1, 2]
    assert ir.selection.default == [2]


def test_no_index_flag_gives_linear():
    src = "f(1).\nf(a).\n"
    assert isinstance(pred(src, "f", 1, enable_index=False).selection, Linear)


def test_zero_arity_linear():
    assert isinstance(pred("p. p.\n", "p", 0).selection, Linear)


def test_all_var_heads_linear():
    assert isinstance(pred("f(_).\nf(_).\n", "f", 1).selection, Linear)


def test_float_int_share_key():
    ir = pred("f(2).\nf(2.0).\nf(3).\n", "f", 1)
    assert ir.selection.buckets == {"N:2": [0, 1], "N:3": [2]}


def test_dump_stable():
    src = "append([], L, L).\nappend([X|Xs], Y, [X|Zs]) :- append(Xs, Y, Zs).\n"
    a = dump_ir(pred(src, "append", 3))
    b = dump_ir(pred(src, "append", 3))
    assert a == b
    assert "selection switch" in a and "chunk 0 last" in a


def test_last_call_pops_frame_semantics():
    # clause whose final chunk carries a call: flagged last, frame present
    ir = pred("p(X) :- q(X), r(X), s(X).\nq(_). r(_). s(_).\n", "p", 1)
    cc = ir.clauses[0]
    assert cc.chunks[-1].is_last and cc.needs_frame and cc.nframe == 1
