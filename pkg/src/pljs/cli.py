"""Compiler driver: `pljs compile`, `pljs run`, `pljs bench`."""

from __future__ import annotations

import argparse
import json
import os
import shutil
import subprocess
import sys
import tempfile
import time

from .codegen import compile_predicate, dump_ir
from .emitter import emit_loader, emit_program, mangle
from .errors import CompileError
from .parser import ModuleAst, parse_term_text, read_module
from .resolve import Program, resolve_modules
from .terms import Term, format_term, term_vars


def _read_sources(paths: list[str]) -> list[ModuleAst]:
    mods = []
    for p in paths:
        with open(p, encoding="utf-8") as fh:
            text = fh.read()
        hint = os.path.splitext(os.path.basename(p))[0]
        mods.append(read_module(text, name_hint=hint))
    return mods


def _warn(prog: Program) -> None:
    for w in prog.warnings:
        print(f"warning: {w}", file=sys.stderr)


def _query_vars(goal: Term) -> list[str]:
    return [v.name for v in term_vars(goal) if not v.name.startswith("_")]


def _query_module(module: str, goal: Term) -> str:
    """Source of a synthetic module wrapping GOAL as '$q'/N for the driver."""
    vs = _query_vars(goal)
    head = "'$q'" + (("(" + ", ".join(vs) + ")") if vs else "")
    return (
        f":- module('$query', ['$q'/{len(vs)}]).\n"
        f":- use_module({module}).\n"
        f"{head} :- {format_term(goal)}.\n"
    )


def find_runtime(explicit: str | None) -> str:
    """Locate the runtime bundle: --runtime flag, PLJS_RUNTIME, or the
    in-repo build."""
    candidates = [explicit, os.environ.get("PLJS_RUNTIME")]
    here = os.path.dirname(os.path.abspath(__file__))
    candidates.append(os.path.join(here, "..", "..", "frontend", "dist", "runtime.js"))
    candidates.append("runtime.js")
    for c in candidates:
        if c and os.path.isfile(c):
            return os.path.abspath(c)
    raise FileNotFoundError(
        "runtime bundle not found; build frontend/dist/runtime.js or set PLJS_RUNTIME"
    )


def build_bundle(prog: Program, runtime_path: str, driver: str, enable_index: bool = True) -> str:
    parts = []
    with open(runtime_path, encoding="utf-8") as fh:
        parts.append(fh.read())
    for em in emit_program(prog, enable_index):
        parts.append(em.source)
    parts.append(driver)
    return "\n".join(parts)


def _run_engine(engine: str, script: str) -> subprocess.CompletedProcess:
    exe = shutil.which(engine)
    if exe is None:
        print(f"error: host engine '{engine}' not found; install it or pass --engine",
              file=sys.stderr)
        sys.exit(2)
    with tempfile.NamedTemporaryFile("w", suffix=".js", delete=False) as fh:
        fh.write(script)
        path = fh.name
    try:
        return subprocess.run([exe, path], capture_output=True, text=True)
    finally:
        os.unlink(path)


RUN_DRIVER = """\
(function () {
  var res;
  try {
    res = $rt.runQuery(%(module)s, %(key)s, %(vars)s);
  } catch (e) {
    console.error(String(e && e.stack ? e.stack : e));
    process.exit(2);
  }
  var out = $rt.takeOutput();
  if (out) process.stdout.write(out);
  for (var i = 0; i < res.answers.length; i++) {
    var parts = [];
    for (var j = 0; j < res.vars.length; j++) {
      parts.push(res.vars[j] + " = " + res.answers[i][j]);
    }
    if (parts.length) console.log(parts.join(", "));
  }
  process.exit(res.answers.length > 0 ? 0 : 1);
})();
"""

BENCH_DRIVER = """\
(function () {
  try {
    var first = $rt.runQuery(%(module)s, %(key)s, []);
    var out = $rt.takeOutput();
    var reps = %(reps)d;
    var t0 = performance.now();
    for (var i = 0; i < reps; i++) {
      $rt.runQuery(%(module)s, %(key)s, []);
      $rt.takeOutput();
    }
    var t1 = performance.now();
    console.log(JSON.stringify({ out: out, ms: t1 - t0, answers: first.answers.length }));
  } catch (e) {
    console.error(String(e && e.stack ? e.stack : e));
    process.exit(2);
  }
})();
"""


def cmd_compile(args: argparse.Namespace) -> int:
    try:
        prog = resolve_modules(_read_sources(args.files))
    except CompileError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    _warn(prog)
    if args.dump_ir:
        for rm in prog.modules.values():
            for p in rm.preds.values():
                if p.foreign is None:
                    sys.stdout.write(dump_ir(compile_predicate(p, not args.no_index)))
        return 0
    mods = emit_program(prog, enable_index=not args.no_index)
    outdir = args.output or "."
    os.makedirs(outdir, exist_ok=True)
    for em in mods:
        with open(os.path.join(outdir, f"{em.module_name}.js"), "w", encoding="utf-8") as fh:
            fh.write(em.source)
    with open(os.path.join(outdir, "loader.js"), "w", encoding="utf-8") as fh:
        fh.write(emit_loader(mods))
    return 0


def _split_entry(entry: str) -> tuple[str, Term]:
    if ":" not in entry:
        raise CompileError(f"bad --entry {entry!r}, expected module:goal")
    module, text = entry.split(":", 1)
    return module, parse_term_text(text + " .")


def cmd_run(args: argparse.Namespace) -> int:
    try:
        module, goal = _split_entry(args.entry)
        mods = _read_sources(args.files)
        mods.append(read_module(_query_module(module, goal), name_hint="$query"))
        prog = resolve_modules(mods)
        _warn(prog)
        runtime = find_runtime(args.runtime)
        vs = _query_vars(goal)
        driver = RUN_DRIVER % {
            "module": json.dumps("$query"),
            "key": json.dumps(mangle("$q", len(vs))),
            "vars": json.dumps(vs),
        }
        script = build_bundle(prog, runtime, driver, enable_index=not args.no_index)
    except (CompileError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    r = _run_engine(args.engine, script)
    sys.stdout.write(r.stdout)
    sys.stderr.write(r.stderr)
    return r.returncode


def _parse_manifest(path: str) -> list[tuple[str, str, str, int, str]]:
    rows = []
    base = os.path.dirname(os.path.abspath(path))
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, file, goal, reps, expected = line.split()
            rows.append((name, os.path.join(base, file), goal, int(reps),
                         os.path.join(base, expected)))
    return rows


def _bench_one(row, args) -> tuple[str, float | None, str]:
    """Run one benchmark; returns (label, ms or None, status)."""
    name, file, goal_text, reps, expected_path = row
    goal = parse_term_text(goal_text + " .")
    mods = _read_sources([file])
    module = mods[0].name
    mods.append(read_module(_query_module(module, goal), name_hint="$query"))
    prog = resolve_modules(mods)
    _warn(prog)
    runtime = find_runtime(args.runtime)
    driver = BENCH_DRIVER % {
        "module": json.dumps("$query"),
        "key": json.dumps(mangle("$q", 0)),
        "reps": reps,
    }
    script = build_bundle(prog, runtime, driver, enable_index=not args.no_index)
    r = _run_engine(args.engine, script)
    label = name if reps == 1 else f"{name} (x{reps})"
    if r.returncode != 0:
        sys.stderr.write(r.stderr)
        return label, None, "FAILED"
    data = json.loads(r.stdout)
    with open(expected_path, encoding="utf-8") as fh:
        expected = fh.read()
    if data["out"] != expected or data["answers"] < 1:
        return label, None, "FAILED"
    return label, data["ms"], "ok"


def _baseline_ms(cmd: str, row) -> float | None:
    name, file, goal_text, reps, _ = row
    full = cmd.format(file=file, goal=goal_text, reps=reps)
    t0 = time.monotonic()
    r = subprocess.run(full, shell=True, capture_output=True, text=True)
    t1 = time.monotonic()
    if r.returncode != 0:
        return None
    return (t1 - t0) * 1000.0


def cmd_bench(args: argparse.Namespace) -> int:
    rows = _parse_manifest(args.manifest)
    cols = ["Benchmark", "time (ms)"]
    if args.baseline:
        cols.append("Ratio")
    table = []
    for row in rows:
        try:
            label, ms, status = _bench_one(row, args)
        except (CompileError, FileNotFoundError) as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        if status == "FAILED":
            table.append([label, "FAILED"] + ([""] if args.baseline else []))
            continue
        cells = [label, f"{ms:.2f}"]
        if args.baseline:
            base = _baseline_ms(args.baseline, row)
            cells.append(f"{ms / base:.2f}" if base else "n/a")
        table.append(cells)
    widths = [max(len(r[i]) for r in [cols] + table) if table else len(cols[i])
              for i in range(len(cols))]
    for r in [cols] + table:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="pljs", description="Prolog-to-JavaScript compiler")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("compile", help="compile modules to JavaScript")
    c.add_argument("files", nargs="+")
    c.add_argument("-o", "--output", help="output directory")
    c.add_argument("--no-index", action="store_true", help="disable first-argument indexing")
    c.add_argument("--dump-ir", action="store_true", help="print the textual IR and stop")
    c.set_defaults(fn=cmd_compile)

    r = sub.add_parser("run", help="compile and run a query in the host engine")
    r.add_argument("files", nargs="+")
    r.add_argument("--entry", required=True, help="module:goal")
    r.add_argument("--engine", default="node", help="host engine executable")
    r.add_argument("--runtime", help="path to runtime bundle")
    r.add_argument("--no-index", action="store_true")
    r.set_defaults(fn=cmd_run)

    b = sub.add_parser("bench", help="run the benchmark suite")
    b.add_argument("manifest")
    b.add_argument("--engine", default="node")
    b.add_argument("--runtime", help="path to runtime bundle")
    b.add_argument("--baseline", help="external Prolog command template ({file} {goal} {reps})")
    b.add_argument("--no-index", action="store_true")
    b.set_defaults(fn=cmd_bench)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
