import shutil
import subprocess

import pytest

from pljs.emitter import (
    abi_ok,
    emit_loader,
    emit_module,
    emit_program,
    mangle,
    referenced_globals,
    sanitize,
)
from pljs.parser import read_module
from pljs.resolve import resolve_modules

HAVE_NODE = shutil.which("node") is not None


def emit(*sources):
    mods = [read_module(s, name_hint=f"m{i}") for i, s in enumerate(sources)]
    return emit_program(resolve_modules(mods))


def node_check(source):
    r = subprocess.run(["node", "--check", "-"], input=source, capture_output=True, text=True)
    assert r.returncode == 0, r.stderr


def test_mangle():
    assert mangle("append", 3) == "append/3"
    assert mangle(".", 2) == "./2"
    assert mangle("p q", 1) == "p q/1"


def test_sanitize():
    assert sanitize("p q") == "p_q"
    assert sanitize("[]") == "__"
    assert sanitize("2nd") == "_2nd"


def test_empty_module_shape():
    (em,) = emit(":- module(m, []).\n")
    flat = " ".join(em.source.split())
    assert flat == '$r.def("m", function (m) { m.link = function () {}; });'


def test_export_table_lines():
    (em,) = emit(":- module(m, [app/3]).\napp(_, _, _).\n")
    assert 'm.exports["app/3"] = m.query("app/3");' in em.source


def test_link_prepares_imports():
    lists = ":- module(lists, [append/3]).\nappend(_, _, _).\n"
    user = ":- module(u, [go/0]).\n:- use_module(lists).\ngo :- append([], [], _).\n"
    mods = {em.module_name: em for em in emit(lists, user)}
    src = mods["u"].source
    assert '$r.query("lists").prepare();' in src
    assert '.exports["append/3"].ctor;' in src


def test_idempotent():
    srcs = (":- module(lists, [append/3]).\nappend([], L, L).\nappend([X|Xs], Y, [X|Zs]) :- append(Xs, Y, Zs).\n",)
    a = [em.source for em in emit(*srcs)]
    b = [em.source for em in emit(*srcs)]
    assert a == b


def test_abi_closure():
    lists = ":- module(lists, [append/3, len/2]).\nappend([], L, L).\nappend([X|Xs], Y, [X|Zs]) :- append(Xs, Y, Zs).\nlen([], 0).\nlen([_|T], N) :- len(T, M), N is M + 1.\n"
    for em in emit(lists):
        assert abi_ok(em)
        assert referenced_globals(em.source) == {"$r"}


@pytest.mark.skipif(not HAVE_NODE, reason="node not installed")
def test_emitted_js_parses():
    lists = ":- module(lists, [append/3]).\nappend([], L, L).\nappend([X|Xs], Y, [X|Zs]) :- append(Xs, Y, Zs).\n"
    user = ":- module(u, [go/0]).\n:- use_module(lists).\ngo :- append([a], [b], R), write(R), nl.\n"
    for em in emit(lists, user):
        node_check(em.source)


@pytest.mark.skipif(not HAVE_NODE, reason="node not installed")
def test_foreign_class_emission_parses():
    src = (
        ":- module(h, [main/0]).\n"
        ':- pred document(-element) + js:foreign("return document;").\n'
        ':- js:foreign_class element {\n'
        '  :- pred body(-element) + js:foreign("return this.body;").\n'
        '  :- pred set_innerHtml(+X) :: string + js:foreign("this.innerHtml=X;").\n'
        "}.\n"
        'main :- document(D), D:body(B), B:set_innerHtml("hello world").\n'
    )
    (em,) = emit(src)
    assert '$r.def("element", function (m) {' in em.source
    assert abi_ok(em)  # foreign bodies excluded from the scan
    node_check(em.source)


def test_foreign_stub_content():
    src = (
        ":- module(h, []).\n"
        ':- pred add(+X, +Y, -Z) :: number * number * number + js:foreign("return X+Y;").\n'
    )
    (em,) = emit(src)
    assert "function body(X, Y) {return X+Y;}" in em.source
    assert "new $tn(r)" in em.source


def test_frame_emission():
    src = ":- module(m, [p/1]).\np(X) :- q(X), r(X).\nq(_). r(_).\n"
    (em,) = emit(src)
    assert "w.pushFrame(1)" in em.source
    assert "w.frame = F.frame;" in em.source
    assert "w.cont = F.cont;" in em.source


def test_choicepoint_only_when_multiple_candidates():
    one = ":- module(m, [p/1]).\np(a).\n"
    (em,) = emit(one)
    assert "pushChoice" not in em.source
    two = ":- module(m, [p/1]).\np(_).\np(_).\n"
    (em,) = emit(two)
    assert "pushChoice" in em.source


def test_loader_topological():
    lists = ":- module(lists, [append/3]).\nappend(_, _, _).\n"
    user = ":- module(u, [go/0]).\n:- use_module(lists).\ngo :- append([], [], _).\n"
    mods = emit(user, lists)  # deliberately out of order
    loader = emit_loader(mods)
    assert loader.index("lists.js") < loader.index("u.js")
    assert loader.index("runtime.js") < loader.index("lists.js")


def test_cut_emission():
    src = ":- module(m, [f/1]).\nf(X) :- g(X), !, h(X).\nf(_).\ng(_). h(_).\n"
    (em,) = emit(src)
    assert "F.cut = ch0;" in em.source
    assert "w.choice = F.cut;" in em.source
