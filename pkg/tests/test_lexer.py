import pytest

from pljs.errors import LexError
from pljs.lexer import tokenize


def kinds(src):
    return [(t.kind, t.text) for t in tokenize(src)]


def test_simple_clause():
    assert kinds("p(X).") == [
        ("atom", "p"), ("punct", "("), ("variable", "X"), ("punct", ")"), ("end", "."),
    ]


def test_numbers():
    ts = tokenize("1 3.14 0'a 0x1f 2.0e3 .")
    assert [t.value for t in ts[:-1]] == [1, 3.14, 97, 31, 2000.0]
    assert ts[0].kind == "integer" and ts[1].kind == "float"


def test_quoted_atom_and_string():
    ts = tokenize("'hello world' \"a\\nb\" 'it''s' .")
    assert ts[0].kind == "atom" and ts[0].value == "hello world"
    assert ts[1].kind == "string" and ts[1].value == "a\nb"
    assert ts[2].value == "it's"


def test_symbolic_maximal_munch():
    assert kinds("X=..Y.")[1] == ("atom", "=..")
    assert kinds("a:-b.")[1] == ("atom", ":-")


def test_end_token_vs_functional_dot():
    # a dot followed by layout ends the clause; adjacent dot is an atom
    ts = tokenize("[a|T].")
    assert ts[-1].kind == "end"
    ts = tokenize("X = '.'(a, b).")
    assert any(t.kind == "atom" and t.value == "." for t in ts)


def test_comments_skipped():
    ts = tokenize("p. % line\n/* block */ q.")
    assert [t.text for t in ts if t.kind == "atom"] == ["p", "q"]


def test_special_atoms():
    ts = tokenize("[] {} ! ; .")
    assert [t.text for t in ts[:-1]] == ["[]", "{}", "!", ";"]


def test_layout_before_tracked():
    ts = tokenize("f (x).")
    assert ts[1].layout_before  # '(' not adjacent: not a compound


def test_unterminated_quote_raises():
    with pytest.raises(LexError):
        tokenize("'abc")


def test_line_and_col():
    ts = tokenize("p.\n  q.")
    q = [t for t in ts if t.text == "q"][0]
    assert (q.line, q.col) == (2, 3)
