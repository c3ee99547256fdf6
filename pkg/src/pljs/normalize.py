"""Normalization into plain Horn clauses: no ;/2, ->/2, \\+/1 in bodies.

Each eliminated control construct becomes a call to a fresh auxiliary
predicate named '<pred>/<arity>$dK' whose clauses carry the alternatives.
The auxiliary closes over exactly the variables shared between the
extracted subgoal and the rest of the clause, passed as arguments.

Known limitation: a cut written inside a disjunction becomes local to the
auxiliary predicate instead of cutting the original clause.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .terms import Atom, Compound, Term, Var, mk, term_vars


@dataclass
class PlainClause:
    head: Term  # Atom or Compound
    body: list[Term]  # plain goals: Atom / Compound / M:G
    aux: bool = False

    @property
    def key(self) -> tuple[str, int]:
        if isinstance(self.head, Compound):
            return (self.head.name, len(self.head.args))
        return (self.head.name, 0)


def _head_key(head: Term) -> tuple[str, int]:
    if isinstance(head, Compound):
        return (head.name, len(head.args))
    return (head.name, 0)


class Normalizer:
    """Per-module normalizer; auxiliary numbering is per source predicate,
    in definition order, so compiling twice is byte-identical."""

    def __init__(self) -> None:
        self.counters: dict[tuple[str, int], int] = {}
        self.out: list[PlainClause] = []

    def normalize_module(self, clauses: list[tuple[Term, Term]]) -> list[PlainClause]:
        for head, body in clauses:
            self.normalize_clause(head, body)
        return self.out

    def normalize_clause(self, head: Term, body: Term) -> list[PlainClause]:
        key = _head_key(head)
        start = len(self.out)
        self.out.append(PlainClause(head, []))
        idx = len(self.out) - 1
        goals = self._flatten(body, key, (head,))
        self.out[idx].body = goals
        return self.out[start:]

    def _auxname(self, key: tuple[str, int]) -> str:
        k = self.counters.get(key, 0)
        self.counters[key] = k + 1
        return f"{key[0]}/{key[1]}$d{k}"

    def _flatten(self, body: Term, key: tuple[str, int], context: tuple[Term, ...]) -> list[Term]:
        """Flatten body into plain goals; context holds the head plus the
        sibling goal terms used for shared-variable computation."""
        if isinstance(body, Atom) and body.name == "true":
            return []
        if isinstance(body, Var):
            return [Compound("call", (body,))]
        if isinstance(body, Compound) and body.name == "," and len(body.args) == 2:
            a, b = body.args
            left = self._flatten(a, key, context + (b,))
            right = self._flatten(b, key, context + (a,))
            return left + right
        if isinstance(body, Compound) and body.name == ";" and len(body.args) == 2:
            a, b = body.args
            if isinstance(a, Compound) and a.name == "->" and len(a.args) == 2:
                cond, then = a.args
                return [self._make_aux(key, context, body, [(Compound(",", (cond, Compound(",", (Atom("!"), then)))),), (b,)])]
            return [self._make_aux(key, context, body, [(a,), (b,)])]
        if isinstance(body, Compound) and body.name == "->" and len(body.args) == 2:
            return self._flatten(Compound(";", (body, Atom("fail"))), key, context)
        if isinstance(body, Compound) and body.name == "\\+" and len(body.args) == 1:
            inner = Compound(",", (body.args[0], Compound(",", (Atom("!"), Atom("fail")))))
            return [self._make_aux(key, context, body, [(inner,), (Atom("true"),)])]
        if not isinstance(body, (Atom, Compound)):
            return [Compound("call", (body,))]
        return [body]

    def _make_aux(
        self,
        key: tuple[str, int],
        context: tuple[Term, ...],
        sub: Term,
        alternatives: list[tuple[Term, ...]],
    ) -> Term:
        subvars = term_vars(sub)
        ctxnames = set()
        for c in context:
            for v in term_vars(c):
                ctxnames.add(v.name)
        shared = [v for v in subvars if v.name in ctxnames]
        name = self._auxname(key)
        call = mk(name, *shared)
        head = call
        for (alt,) in [(a[0],) for a in alternatives]:
            idx = len(self.out)
            self.out.append(PlainClause(head, [], aux=True))
            goals = self._flatten(alt, key, (head,))
            self.out[idx].body = goals
        return call


def normalize_clause(head: Term, body: Term) -> list[PlainClause]:
    return Normalizer().normalize_clause(head, body)


def normalize_module(clauses: list[tuple[Term, Term]]) -> list[PlainClause]:
    return Normalizer().normalize_module(clauses)
