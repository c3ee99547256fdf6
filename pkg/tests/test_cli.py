import os

import pytest

from pljs.cli import main

LISTS = """\
:- module(lists, [append/3]).
append([], L, L).
append([X|Xs], Y, [X|Zs]) :- append(Xs, Y, Zs).
"""


@pytest.fixture
def lists_pl(tmp_path):
    p = tmp_path / "lists.pl"
    p.write_text(LISTS)
    return p


def test_compile_writes_files(lists_pl, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["compile", str(lists_pl), "-o", str(out)]) == 0
    assert sorted(os.listdir(out)) == ["lists.js", "loader.js"]
    assert '$r.def("lists"' in (out / "lists.js").read_text()


def test_compile_deterministic(lists_pl, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["compile", str(lists_pl), "-o", str(a)])
    main(["compile", str(lists_pl), "-o", str(b)])
    assert (a / "lists.js").read_bytes() == (b / "lists.js").read_bytes()


def test_dump_ir(lists_pl, capsys):
    assert main(["compile", "--dump-ir", str(lists_pl)]) == 0
    out = capsys.readouterr().out
    assert "pred lists:append/3" in out
    assert "selection switch" in out


def test_dump_ir_no_index(lists_pl, capsys):
    assert main(["compile", "--dump-ir", "--no-index", str(lists_pl)]) == 0
    out = capsys.readouterr().out
    assert "selection linear" in out
    assert "switch" not in out


def test_compile_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.pl"
    bad.write_text(":- module(bad, [ghost/0]).\n")
    assert main(["compile", str(bad), "-o", str(tmp_path / "o")]) == 1
    assert not (tmp_path / "o").exists()
    assert "error" in capsys.readouterr().err


def test_warnings_on_stderr(tmp_path, capsys):
    src = tmp_path / "w.pl"
    src.write_text(":- module(w, [p/0]).\np :- nosuch.\n")
    assert main(["compile", str(src), "-o", str(tmp_path / "o")]) == 0
    assert "warning" in capsys.readouterr().err


def test_bench_empty_suite(tmp_path, capsys):
    manifest = tmp_path / "suite.txt"
    manifest.write_text("# no benchmarks\n")
    assert main(["bench", str(manifest)]) == 0
    out = capsys.readouterr().out
    assert "Benchmark" in out and "time (ms)" in out
