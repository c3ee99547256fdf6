"""Compile resolved plain clauses into chunked IR.

A chunk is a maximal run of steps ending in at most one predicate call;
each chunk compiles to one continuation closure.  There are no X registers:
arguments are read from the goal object and temporaries are target-language
locals; variables crossing a chunk boundary get frame (Y) slots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .resolve import INLINE_BUILTINS, Goal, RClause, RPred
from .terms import Atom, Compound, Float, Int, Str, Term, Var

# -- slots ----------------------------------------------------------------


@dataclass(frozen=True)
class Temp:
    index: int


@dataclass(frozen=True)
class FrameY:
    index: int


Slot = Temp | FrameY


@dataclass
class SlotAssignment:
    slots: dict[str, Slot]
    nframe: int


# -- build/match patterns -------------------------------------------------


@dataclass
class PConst:
    kind: str  # atom | int | float | str
    value: object


@dataclass
class PVar:
    name: str
    slot: Slot
    first: bool = False


@dataclass
class PStruct:
    name: str
    args: list


Pat = PConst | PVar | PStruct


# -- steps ----------------------------------------------------------------


@dataclass
class GetArg:
    index: int
    pat: Pat


@dataclass
class BuiltinInline:
    op: str
    args: list


@dataclass
class CutStep:
    pass


@dataclass
class CallInfo:
    module: str
    name: str
    arity: int
    args: list


@dataclass
class Chunk:
    steps: list
    call: CallInfo | None
    is_last: bool = False


@dataclass
class ClauseCode:
    nframe: int
    chunks: list[Chunk]
    needs_frame: bool
    saves_cut: bool


@dataclass
class Linear:
    pass


@dataclass
class FirstArgSwitch:
    buckets: dict[str, list[int]]  # runtime key -> clause indices
    var_bucket: list[int]  # all clauses, for an unbound first argument
    default: list[int]  # clauses whose first head argument is a variable


Selection = Linear | FirstArgSwitch


@dataclass
class PredIR:
    module: str
    name: str
    arity: int
    clauses: list[ClauseCode]
    selection: Selection


# -- compilation ----------------------------------------------------------


def _goal_vars(t: Term, acc: set[str]) -> None:
    if isinstance(t, Var):
        acc.add(t.name)
    elif isinstance(t, Compound):
        for a in t.args:
            _goal_vars(a, acc)


def _split_goals(body: list[Goal]) -> list[tuple[list[Goal], Goal | None]]:
    """Group goals into chunk skeletons: inline steps, then at most one call."""
    chunks: list[tuple[list[Goal], Goal | None]] = []
    pre: list[Goal] = []
    for g in body:
        if g.module == "$cut":
            pre.append(g)
            continue
        key = (g.term.name, len(g.term.args) if isinstance(g.term, Compound) else 0)
        if key in INLINE_BUILTINS and g.module in ("term_basic", "arithmetic"):
            pre.append(g)
            continue
        chunks.append((pre, g))
        pre = []
    if pre or not chunks:
        chunks.append((pre, None))
    return chunks


def allocate_slots(head: Term, body: list[Goal]) -> SlotAssignment:
    """Assign each clause variable one slot: FrameY when it occurs in more
    than one chunk, Temp otherwise.  FrameY indices are dense from 0."""
    skel = _split_goals(body)
    occ: dict[str, set[int]] = {}

    def note(t: Term, ci: int) -> None:
        vs: set[str] = set()
        _goal_vars(t, vs)
        for v in vs:
            occ.setdefault(v, set()).add(ci)

    note(head, 0)
    for ci, (pre, call) in enumerate(skel):
        for g in pre:
            note(g.term, ci)
        if call is not None:
            note(call.term, ci)

    order: list[str] = []

    def first_order(t: Term) -> None:
        if isinstance(t, Var):
            if t.name not in order:
                order.append(t.name)
        elif isinstance(t, Compound):
            for a in t.args:
                first_order(a)

    first_order(head)
    for pre, call in skel:
        for g in pre:
            first_order(g.term)
        if call is not None:
            first_order(call.term)

    slots: dict[str, Slot] = {}
    ny = 0
    nt = 0
    for v in order:
        if len(occ[v]) > 1:
            slots[v] = FrameY(ny)
            ny += 1
        else:
            slots[v] = Temp(nt)
            nt += 1
    return SlotAssignment(slots, ny)


def split_chunks(head: Term, body: list[Goal], slots: SlotAssignment) -> ClauseCode:
    skel = _split_goals(body)
    seen: set[str] = set()

    def pat(t: Term) -> Pat:
        if isinstance(t, Var):
            first = t.name not in seen
            seen.add(t.name)
            return PVar(t.name, slots.slots[t.name], first)
        if isinstance(t, Atom):
            return PConst("atom", t.name)
        if isinstance(t, Int):
            return PConst("int", t.value)
        if isinstance(t, Float):
            return PConst("float", t.value)
        if isinstance(t, Str):
            return PConst("str", t.text)
        assert isinstance(t, Compound)
        return PStruct(t.name, [pat(a) for a in t.args])

    chunks: list[Chunk] = []
    head_args = head.args if isinstance(head, Compound) else ()
    for ci, (pre, call) in enumerate(skel):
        steps: list = []
        if ci == 0:
            for i, a in enumerate(head_args):
                steps.append(GetArg(i, pat(a)))
        for g in pre:
            if g.module == "$cut":
                steps.append(CutStep())
            else:
                t = g.term
                args = t.args if isinstance(t, Compound) else ()
                steps.append(BuiltinInline(t.name, [pat(a) for a in args]))
        ci_call = None
        if call is not None:
            t = call.term
            args = t.args if isinstance(t, Compound) else ()
            ci_call = CallInfo(call.module, t.name, len(args), [pat(a) for a in args])
        chunks.append(Chunk(steps, ci_call))
    last = chunks[-1]
    if last.call is not None:
        last.is_last = True
    needs_frame = len(chunks) > 1
    saves_cut = any(isinstance(s, CutStep) for c in chunks for s in c.steps)
    return ClauseCode(slots.nframe, chunks, needs_frame, saves_cut)


def first_arg_key(clause: ClauseCode) -> str | None:
    """Runtime dispatch key of the first head argument, or None for a
    variable.  Must agree with the runtime's key function."""
    for s in clause.chunks[0].steps:
        if isinstance(s, GetArg) and s.index == 0:
            return pat_key(s.pat)
        break
    return None


def pat_key(p: Pat) -> str | None:
    if isinstance(p, PVar):
        return None
    if isinstance(p, PStruct):
        return f"{p.name}/{len(p.args)}"
    if p.kind == "atom":
        return f"{p.value}/0"
    if p.kind == "int":
        return f"N:{p.value}"
    if p.kind == "float":
        return f"N:{_js_num(p.value)}"
    return f"S:{p.value}"


def _js_num(v: float) -> str:
    if v == int(v) and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def index_clauses(clauses: list[ClauseCode], enable: bool, arity: int) -> Selection:
    if not enable or arity == 0 or len(clauses) < 2:
        return Linear()
    keys = [first_arg_key(c) for c in clauses]
    if all(k is None for k in keys):
        return Linear()
    buckets: dict[str, list[int]] = {}
    for i, k in enumerate(keys):
        if k is not None and k not in buckets:
            buckets[k] = []
    for i, k in enumerate(keys):
        if k is None:
            for b in buckets.values():
                b.append(i)
        else:
            buckets[k].append(i)
    var_bucket = list(range(len(clauses)))
    default = [i for i, k in enumerate(keys) if k is None]
    return FirstArgSwitch(buckets, var_bucket, default)


def compile_clause(rc: RClause) -> ClauseCode:
    return split_chunks(rc.head, rc.body, allocate_slots(rc.head, rc.body))


def compile_predicate(pred: RPred, enable_index: bool = True) -> PredIR:
    for c in pred.clauses:
        k = (c.head.name, len(c.head.args) if isinstance(c.head, Compound) else 0)
        if k != (pred.name, pred.arity):
            raise AssertionError(f"clause head {k} does not match predicate {pred.key}")
    clauses = [compile_clause(c) for c in pred.clauses]
    return PredIR(
        pred.module,
        pred.name,
        pred.arity,
        clauses,
        index_clauses(clauses, enable_index, pred.arity),
    )


# -- stable textual dump --------------------------------------------------


def _fmt_slot(s: Slot) -> str:
    return f"Y{s.index}" if isinstance(s, FrameY) else f"T{s.index}"


def fmt_pat(p: Pat) -> str:
    if isinstance(p, PVar):
        return f"{_fmt_slot(p.slot)}{'!' if p.first else ''}"
    if isinstance(p, PStruct):
        return f"{p.name}/{len(p.args)}(" + ",".join(fmt_pat(a) for a in p.args) + ")"
    if p.kind == "atom":
        return f"'{p.value}'"
    if p.kind == "str":
        return f'"{p.value}"'
    return str(p.value)


def dump_ir(ir: PredIR) -> str:
    lines = [f"pred {ir.module}:{ir.name}/{ir.arity} clauses={len(ir.clauses)}"]
    if isinstance(ir.selection, Linear):
        lines.append("  selection linear")
    else:
        lines.append("  selection switch")
        for k, b in ir.selection.buckets.items():
            lines.append(f"    key {k} -> {','.join(map(str, b))}")
        lines.append(f"    var -> {','.join(map(str, ir.selection.var_bucket))}")
        lines.append(f"    default -> {','.join(map(str, ir.selection.default))}")
    for i, c in enumerate(ir.clauses):
        lines.append(
            f"  clause {i} nframe={c.nframe} frame={'yes' if c.needs_frame else 'no'}"
            f" cut={'yes' if c.saves_cut else 'no'}"
        )
        for j, ch in enumerate(c.chunks):
            lines.append(f"    chunk {j}{' last' if ch.is_last else ''}")
            for s in ch.steps:
                if isinstance(s, GetArg):
                    lines.append(f"      getarg {s.index} {fmt_pat(s.pat)}")
                elif isinstance(s, BuiltinInline):
                    lines.append(f"      inline {s.op} " + " ".join(fmt_pat(a) for a in s.args))
                else:
                    lines.append("      cut")
            if ch.call is not None:
                lines.append(
                    f"      call {ch.call.module}:{ch.call.name}/{ch.call.arity} "
                    + " ".join(fmt_pat(a) for a in ch.call.args)
                )
    return "\n".join(lines) + "\n"
