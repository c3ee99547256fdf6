from pljs.interp import Interp, run_query
from pljs.parser import read_module


def solutions(src, goal, **kw):
    return run_query(src, goal, **kw)


def test_facts():
    assert solutions("p(a).\np(b).\n", "p(X)") == [{"X": "a"}, {"X": "b"}]


def test_append():
    src = "app([], L, L).\napp([X|Xs], Y, [X|Zs]) :- app(Xs, Y, Zs).\n"
    assert solutions(src, "app([a], [b], Z)") == [{"Z": "[a,b]"}]
    # backtracking over splittings
    got = solutions(src, "app(X, Y, [1,2])")
    assert len(got) == 3


def test_cut_commits():
    src = "max(X, Y, X) :- X >= Y, !.\nmax(X, Y, Y) :- X < Y.\n"
    assert solutions(src, "max(3, 2, M)") == [{"M": "3"}]
    assert solutions(src, "max(2, 3, M)") == [{"M": "3"}]


def test_cut_local_to_call():
    src = "p(X) :- q(X), !.\np(z).\nq(a).\nq(b).\n"
    assert solutions(src, "p(X)") == [{"X": "a"}]


def test_if_then_else():
    src = "t(X, y) :- (X = a -> true ; fail).\nu(X, R) :- (X = a -> R = yes ; R = no).\n"
    assert solutions(src, "t(a, Y)") == [{"Y": "y"}]
    assert solutions(src, "t(b, Y)") == []
    assert solutions(src, "u(b, R)") == [{"R": "no"}]


def test_if_then_condition_bindings_kept():
    src = "m(X) :- (member(X, [1,2,3]) -> true ; fail).\nmember(X, [X|_]).\nmember(X, [_|T]) :- member(X, T).\n"
    # the condition commits to its first solution
    assert solutions(src, "m(X)") == [{"X": "1"}]


def test_negation():
    src = "p(a).\nq(X) :- \\+ p(X).\n"
    assert solutions(src, "q(b)") == [{}]
    assert solutions(src, "q(a)") == []


def test_arithmetic():
    assert solutions("", "X is 3 + 4 * 2") == [{"X": "11"}]
    assert solutions("", "X is 7 // 2") == [{"X": "3"}]
    assert solutions("", "X is -7 // 2") == [{"X": "-3"}]  # truncates toward zero
    assert solutions("", "X is -7 mod 2") == [{"X": "1"}]  # floored
    assert solutions("", "X is 6 / 3") == [{"X": "2"}]


def test_value_equal_numbers_unify():
    assert solutions("", "X is 4 / 2, X = 2") == [{"X": "2"}]


def test_comparisons():
    assert solutions("", "2 < 3") == [{}]
    assert solutions("", "3 =< 2") == []
    assert solutions("", "2 =:= 2.0") == [{}]


def test_var_nonvar():
    assert solutions("", "var(X), X = 1") == [{"X": "1"}]
    assert solutions("", "nonvar(f(Y))") != []


def test_univ_and_functor():
    assert solutions("", "f(a, b) =.. L") == [{"L": "[f,a,b]"}]
    assert solutions("", "functor(f(a, b), N, A)") == [{"N": "f", "A": "2"}]


def test_between():
    assert [d["X"] for d in solutions("", "between(1, 3, X)")] == ["1", "2", "3"]


def test_write_output():
    from pljs.interp import Interp
    from pljs.parser import parse_term_text

    it = Interp.from_clauses(read_module("go :- write(f(1)), nl.\n", name_hint="u").clauses)
    run_query("go :- write(f(1)), nl.\n", "go")
    # output capture is exposed through run_query's out parameter
    out = []
    assert solutions("go :- write(f(1)), nl.\n", "go", out=out) == [{}]
    assert "".join(out) == "f(1)\n"


def test_unknown_predicate_fails_silently():
    assert solutions("", "nosuch(1)") == []


def test_limit():
    src = "nat(0).\nnat(s(N)) :- nat(N).\n"
    assert len(solutions(src, "nat(X)", limit=5)) == 5
