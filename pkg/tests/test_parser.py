import pytest

from pljs.errors import ParseError, ReadError
from pljs.parser import parse_term_text, read_module
from pljs.terms import Atom, Compound, Int, Var, format_term


def rt(text):
    """Round-trip a term through the canonical writer."""
    return format_term(parse_term_text(text + " ."))


def test_operator_precedence():
    t = parse_term_text("a + b * c .")
    assert t.name == "+" and t.args[1].name == "*"
    assert rt("a+b*c") == "a+b*c"
    assert rt("(a+b)*c") == "(a+b)*c"


def test_right_assoc_comma():
    t = parse_term_text("a , b , c .")
    assert t.name == "," and t.args[1].name == ","


def test_prefix_minus_number():
    assert parse_term_text("-1 .") == Int(-1)
    t = parse_term_text("- X .")
    assert t.name == "-" and isinstance(t.args[0], Var)


def test_lists():
    assert rt("[a,b|T]") == "[a,b|T]"
    assert rt("[]") == "[]"
    t = parse_term_text("[a] .")
    assert t == Compound(".", (Atom("a"), Atom("[]")))


def test_curly():
    t = parse_term_text("{a,b} .")
    assert t.name == "{}"


def test_compound_requires_adjacency():
    assert parse_term_text("f(x) .") == Compound("f", (Atom("x"),))
    with pytest.raises(ParseError):
        parse_term_text("f (x) .")  # layout before '(': not a compound


def test_if_then_else_shape():
    t = parse_term_text("( a -> b ; c ) .")
    assert t.name == ";" and t.args[0].name == "->"


def test_parse_error_reports_position():
    with pytest.raises(ParseError):
        parse_term_text("f(a,) .")


def test_read_module_basics():
    m = read_module(
        ":- module(m, [p/1]).\n:- use_module(lists).\np(a).\np(X) :- q(X).\nq(b).\n",
        name_hint="m",
    )
    assert m.name == "m"
    assert m.exports == [("p", 1)]
    assert m.imports == [("lists", "all")]
    assert len(m.clauses) == 3


def test_module_decl_not_first_warns():
    m = read_module("p.\n:- module(m, []).\n", name_hint="f")
    assert any("module" in w for w in m.warnings)


def test_implicit_user_module():
    m = read_module("p(a).\n", name_hint="scratch")
    assert m.name == "scratch" and not m.explicit_module


def test_op_directive_scoped():
    m = read_module(":- module(m, []).\n:- op(700, xfx, ===).\np :- a === b.\n", name_hint="m")
    _, body = m.clauses[0]
    assert body.name == "==="


def test_clause_after_end_of_file_rejected():
    with pytest.raises(ReadError):
        read_module("p.\nend_of_file.\nq.\n", name_hint="m")


def test_anonymous_vars_distinct():
    m = read_module("p(_, _).\n", name_hint="m")
    head, _ = m.clauses[0]
    a, b = head.args
    assert isinstance(a, Var) and isinstance(b, Var) and a.name != b.name
