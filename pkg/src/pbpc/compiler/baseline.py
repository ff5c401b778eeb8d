"""Naive compilation: inline every call, both qcase branches in sequence, no ancillas."""

from __future__ import annotations

import sys
from dataclasses import dataclass

from pbpc.circuit import Circuit, Gate, circuit_stats
from pbpc.frontend import ast as A
from pbpc.semantics import eval_bool, eval_qubit, eval_set, unitary_of

DEFAULT_BUDGET = 10**7


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class SizeCount:
    gates: int
    wires: int

    @property
    def size(self) -> int:
        return self.gates + self.wires


class _Counter:
    def __init__(self, bodies):
        self.bodies = bodies
        self.memo: dict = {}
        self.keep: list = []

    def gates(self, s, l: tuple) -> int:
        if isinstance(s, A.Skip):
            return 0
        if isinstance(s, A.Unitary):
            return 1
        key = (id(s), l)
        if key in self.memo:
            return self.memo[key]
        if isinstance(s, A.Seq):
            v = self.gates(s.first, l) + self.gates(s.second, l)
        elif isinstance(s, A.If):
            v = self.gates(s.then if eval_bool(s.cond, list(l)) else s.orelse, l)
        elif isinstance(s, A.QCase):
            v = self.gates(s.branch0, l) + self.gates(s.branch1, l)
        elif isinstance(s, A.Call):
            l2 = tuple(eval_set(s.arg, list(l)))
            v = self.gates(self.bodies[s.proc], l2) if l2 else 0
        else:
            raise TypeError(s)
        self.memo[key] = v
        self.keep.append(s)
        return v


def _emit(bodies, s, l: list, cs: dict, out: list, budget: int) -> None:
    if isinstance(s, A.Skip):
        return
    if isinstance(s, A.Unitary):
        if len(out) >= budget:
            raise BudgetExceeded(f"more than {budget} gates")
        kind, theta = unitary_of(s, l)
        out.append(Gate.make(kind, eval_qubit(s.target, l), cs, theta))
    elif isinstance(s, A.Seq):
        _emit(bodies, s.first, l, cs, out, budget)
        _emit(bodies, s.second, l, cs, out, budget)
    elif isinstance(s, A.If):
        _emit(bodies, s.then if eval_bool(s.cond, l) else s.orelse, l, cs, out, budget)
    elif isinstance(s, A.QCase):
        w = eval_qubit(s.control, l)
        _emit(bodies, s.branch0, l, {**cs, w: 0}, out, budget)
        _emit(bodies, s.branch1, l, {**cs, w: 1}, out, budget)
    elif isinstance(s, A.Call):
        l2 = eval_set(s.arg, l)
        if l2:
            _emit(bodies, bodies[s.proc], l2, cs, out, budget)
    else:
        raise TypeError(s)


def compile_baseline(p: A.Program, n: int, materialize: bool = True, budget: int = DEFAULT_BUDGET, checked: bool = False):
    """Fully inlined circuit (``materialize``) or its exact :class:`SizeCount`."""
    if not checked:
        from pbpc.compiler.core import _precheck

        _precheck(p, n, "sequential")
    bodies = {d.name: d.body for d in p.decls}
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        if not materialize:
            return SizeCount(_Counter(bodies).gates(p.body, tuple(range(1, n + 1))), n)
        gates: list = []
        _emit(bodies, p.body, list(range(1, n + 1)), {}, gates, budget)
    finally:
        sys.setrecursionlimit(old)
    from pbpc.compiler.core import CompileOutput

    circ = Circuit(n, 0, gates)
    stats = circuit_stats(circ)
    stats.update(ancilla_count=0, anchor_events=0, merge_events=0, permutation_blocks=0)
    return CompileOutput(circ, stats, "sequential")
