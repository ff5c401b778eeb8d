"""Circuit compilation with anchoring and merging of recursive calls.

``compile`` walks a statement under a control structure and emits gates.
A call to a recursive procedure hands its body to ``optimize``, which keeps
three gate accumulators (left, middle, right) and a worklist of controlled
statements.  The first call on a given (procedure, size) key creates an
ancilla and enqueues the body controlled on it; later calls on the same key
only flip that ancilla.  Statements without recursive calls are deferred to a
contextual list, cut into time slices and compiled at the end.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field

from pbpc.analysis import Analysis, classify_program
from pbpc.circuit import Circuit, CircuitError, Gate, circuit_stats
from pbpc.compiler.orthogonality import OrthogonalityChecker
from pbpc.frontend import ast as A
from pbpc.permutation import permutation_gates
from pbpc.semantics import Diverged, RunFailed, eval_bool, eval_qubit, eval_set, static_time, unitary_of

STRATEGIES = ("merge", "sequential", "swap")


class CompileError(Exception):
    pass


@dataclass
class ControlledStatement:
    controls: dict
    statement: A.Statement
    pointers: list


@dataclass
class CompileOutput:
    circuit: Circuit
    stats: dict
    strategy: str


@dataclass
class _Anchor:
    wire: int
    pointers: list


@dataclass
class _Counters:
    anchor_events: int = 0
    merge_events: int = 0
    permutation_blocks: int = 0


def _extend(cs: dict, w: int, b: int) -> dict:
    out = dict(cs)
    out[w] = b
    return out


def seq_decompose(cs: dict, s: A.Statement, l: list) -> list[ControlledStatement]:
    """Atomic controlled statements of ``(cs, s)`` in execution order."""
    if isinstance(s, A.Skip):
        return []
    if isinstance(s, (A.Unitary, A.Call)):
        return [ControlledStatement(cs, s, l)]
    if isinstance(s, A.Seq):
        return seq_decompose(cs, s.first, l) + seq_decompose(cs, s.second, l)
    if isinstance(s, A.If):
        return seq_decompose(cs, s.then if eval_bool(s.cond, l) else s.orelse, l)
    if isinstance(s, A.QCase):
        w = eval_qubit(s.control, l)
        return seq_decompose(_extend(cs, w, 0), s.branch0, l) + seq_decompose(_extend(cs, w, 1), s.branch1, l)
    raise TypeError(s)


def procedure_split(entries: list[ControlledStatement], analysis: Analysis):
    """Split atomic entries into non-recursive ones and one list per family."""
    fams = analysis.graph.families
    groups: list[list] = [[] for _ in fams]
    rest = []
    for e in entries:
        hits = [i for i, f in enumerate(fams) if analysis.w(f[0], e.statement) >= 1]
        assert len(hits) <= 1, f"{e.statement} calls into several recursion families"
        if hits:
            groups[hits[0]].append(e)
        else:
            rest.append(e)
    return rest, [(fams[i][0], g) for i, g in enumerate(groups) if g]


class _Compiler:
    def __init__(self, p: A.Program, n: int, strategy: str, check: bool):
        self.p = p
        self.n = n
        self.strategy = strategy
        self.an = Analysis(p)
        self.bodies = self.an.bodies
        self.next_wire = n
        self.anchors: list = []
        self.ortho = OrthogonalityChecker(n, enabled=check)
        self.count = _Counters()
        self.copy_pool: list[int] = []

    def fresh(self) -> int:
        self.next_wire += 1
        return self.next_wire

    # -- compile ------------------------------------------------------------

    def compile(self, s, l: list, cs: dict, out: list) -> None:
        if isinstance(s, A.Skip):
            return
        if isinstance(s, A.Unitary):
            w = eval_qubit(s.target, l)
            kind, theta = unitary_of(s, l)
            out.append(Gate.make(kind, w, cs, theta))
        elif isinstance(s, A.Seq):
            self.compile(s.first, l, cs, out)
            self.compile(s.second, l, cs, out)
        elif isinstance(s, A.If):
            self.compile(s.then if eval_bool(s.cond, l) else s.orelse, l, cs, out)
        elif isinstance(s, A.QCase):
            w = eval_qubit(s.control, l)
            self.compile(s.branch0, l, _extend(cs, w, 0), out)
            self.compile(s.branch1, l, _extend(cs, w, 1), out)
        elif isinstance(s, A.Call):
            l2 = eval_set(s.arg, l)
            if not l2:
                return
            if self.an.width(s.proc) == 0:
                self.compile(self.bodies[s.proc], l2, cs, out)
            else:
                out += self.optimize([ControlledStatement(cs, self.bodies[s.proc], l2)], s.proc)
        else:
            raise TypeError(s)

    # -- optimize -----------------------------------------------------------

    def optimize(self, entries: list[ControlledStatement], proc: str) -> list:
        left: list = []
        right: deque = deque()
        middle: list = []
        context: list[ControlledStatement] = []
        anc: dict[tuple, _Anchor] = {}
        work: deque = deque()
        w = self.an.w

        def live():
            for e in work:
                yield e.controls
            for e in context:
                yield e.controls

        def push(e: ControlledStatement) -> None:
            self.ortho.require(e.controls, live())
            work.append(e)

        def defer(e: ControlledStatement) -> None:
            if isinstance(e.statement, A.Skip):
                return  # contributes no gates to any slice
            self.ortho.require(e.controls, live())
            context.append(e)

        def prepend_right(gates: list) -> None:
            right.extendleft(reversed(gates))

        for e in entries:
            push(e)

        while work:
            e = work.popleft()
            cs, s, l = e.controls, e.statement, e.pointers
            if w(proc, s) == 0:
                defer(e)
            elif isinstance(s, A.Seq):
                if w(proc, s.first) >= 1:
                    push(ControlledStatement(cs, s.first, l))
                    tail: list = []
                    self.compile(s.second, l, cs, tail)
                    prepend_right(tail)
                else:
                    self.compile(s.first, l, cs, left)
                    push(ControlledStatement(cs, s.second, l))
            elif isinstance(s, A.If):
                b = s.then if eval_bool(s.cond, l) else s.orelse
                (push if w(proc, b) >= 1 else defer)(ControlledStatement(cs, b, l))
            elif isinstance(s, A.QCase):
                q = eval_qubit(s.control, l)
                e0 = ControlledStatement(_extend(cs, q, 0), s.branch0, l)
                e1 = ControlledStatement(_extend(cs, q, 1), s.branch1, l)
                r0, r1 = w(proc, s.branch0) >= 1, w(proc, s.branch1) >= 1
                if r0 and r1:
                    push(e0)
                    push(e1)
                elif r0:
                    push(e0)
                    defer(e1)
                else:
                    push(e1)
                    defer(e0)
            elif isinstance(s, A.Call):
                l2 = eval_set(s.arg, l)
                if not l2:
                    continue
                key = (s.proc, len(l2))
                if key in anc:
                    self.merge(anc[key], cs, l2, left, prepend_right)
                else:
                    a = self.fresh()
                    anc[key] = _Anchor(a, l2)
                    self.anchors.append((a, s.proc, len(l2)))
                    self.ortho.flip(a, cs)
                    self.count.anchor_events += 1
                    left.append(Gate.make("NOT", a, cs))
                    prepend_right([Gate.make("NOT", a, cs)])
                    push(ControlledStatement({a: 1}, self.bodies[s.proc], l2))
            else:
                raise TypeError(s)

        slices = [seq_decompose(e.controls, e.statement, e.pointers) for e in context]
        T = max((len(x) for x in slices), default=0)
        for t in range(T):
            layer = [x[t] for x in slices if t < len(x)]
            rest, fams = procedure_split(layer, self.an)
            for e in rest:
                self.compile(e.statement, e.pointers, e.controls, middle)
            for rep, group in fams:
                middle += self.optimize(group, rep)
        return left + middle + list(right)

    def merge(self, anchor: _Anchor, cs: dict, l2: list, left: list, prepend_right) -> None:
        a = anchor.wire
        self.count.merge_events += 1
        if l2 == anchor.pointers:
            self.ortho.flip(a, cs)
            left.append(Gate.make("NOT", a, cs))
            prepend_right([Gate.make("NOT", a, cs)])
            return
        if self.strategy != "swap":
            raise CompileError(
                f"merging calls on {l2} and {anchor.pointers} needs the swap strategy"
            )
        mapping = {}
        for src, dst in zip(l2, anchor.pointers):
            mapping[src] = dst
        free_src = [x for x in anchor.pointers if x not in mapping]
        free_dst = [x for x in l2 if x not in mapping.values()]
        mapping.update(zip(free_src, free_dst))
        moved = {x for x, y in mapping.items() if x != y}
        if moved & {x for x in cs if x <= self.n}:
            raise CompileError(f"permutation of wires {sorted(moved)} would disturb the controls {sorted(cs.items())}")
        b = self.fresh()
        self.ortho.flip(b, cs)
        self.ortho.flip(a, {b: 1})
        self.count.permutation_blocks += 1
        used = [0]

        def take() -> int:
            if used[0] == len(self.copy_pool):
                self.copy_pool.append(self.fresh())
            used[0] += 1
            return self.copy_pool[used[0] - 1]

        perm = permutation_gates(mapping, b, 1, take)
        used[0] = 0
        inv = permutation_gates({y: x for x, y in mapping.items()}, b, 1, take)
        left += [Gate.make("NOT", b, cs)] + perm + [Gate.make("NOT", a, {b: 1})]
        prepend_right([Gate.make("NOT", a, {b: 1})] + inv + [Gate.make("NOT", b, cs)])


def _precheck(p: A.Program, n: int, strategy: str):
    if strategy not in STRATEGIES:
        raise CompileError(f"unknown strategy {strategy!r}")
    report = classify_program(p)
    if not report.wf:
        raise CompileError("program is not well-founded: " + "; ".join(report.diagnostics))
    if strategy != "sequential" and not report.width_le_1:
        raise CompileError(f"strategy {strategy} needs width <= 1: " + "; ".join(report.diagnostics))
    try:
        static_time(p, n)
    except RunFailed as exc:
        raise CompileError(f"erroneous at size {n}: {exc}") from exc
    except Diverged as exc:
        raise CompileError(f"no terminating run at size {n}: {exc}") from exc
    return report


def compile_program(p: A.Program, n: int, strategy: str = "merge", check_orthogonality: bool = True) -> CompileOutput:
    """Compile ``p`` for ``n`` input qubits."""
    _precheck(p, n, strategy)
    if strategy == "sequential":
        from pbpc.compiler.baseline import compile_baseline

        return compile_baseline(p, n, materialize=True, checked=True)
    c = _Compiler(p, n, strategy, check_orthogonality)
    gates: list = []
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        c.compile(p.body, list(range(1, n + 1)), {}, gates)
    except CircuitError as exc:
        raise CompileError(str(exc)) from exc
    finally:
        sys.setrecursionlimit(old)
    circ = Circuit(n, c.next_wire - n, gates, list(c.anchors))
    stats = circuit_stats(circ)
    stats.update(
        ancilla_count=circ.ancillas,
        anchor_events=c.count.anchor_events,
        merge_events=c.count.merge_events,
        permutation_blocks=c.count.permutation_blocks,
        orthogonality_checks=c.ortho.checks,
    )
    return CompileOutput(circ, stats, strategy)


def compile_swap(p: A.Program, n: int, check_orthogonality: bool = True) -> CompileOutput:
    return compile_program(p, n, "swap", check_orthogonality)
