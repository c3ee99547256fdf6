#!/usr/bin/env python3
"""Regenerate the stored expected outputs with the reference interpreter.

Usage: python3 benchmarks/gen_expected.py [name ...]
"""
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from pljs.interp import run_query

HERE = os.path.dirname(os.path.abspath(__file__))

NAMES = ["nreverse", "tak", "qsort", "queens", "primes", "deriv",
         "query", "poly", "crypt", "fft", "boyer"]


def main(argv):
    names = argv or NAMES
    for name in names:
        with open(os.path.join(HERE, name + ".pl")) as f:
            source = f.read()
        out = []
        answers = run_query(source, "main", out=out)
        if not answers:
            raise SystemExit("%s: goal failed" % name)
        text = "".join(out)
        path = os.path.join(HERE, "expected", name + ".txt")
        with open(path, "w") as f:
            f.write(text)
        print("%-10s %3d answers  %r" % (name, len(answers),
                                         text if len(text) < 70 else text[:67] + "..."))


if __name__ == "__main__":
    main(sys.argv[1:])
