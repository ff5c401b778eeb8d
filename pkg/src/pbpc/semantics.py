"""Reference interpreter: expression evaluation and big-step execution.

Sorted sets evaluate to lists of 1-based wire pointers.  Out-of-range accesses
are in-band: a bad qubit index gives pointer 0 and a bad removal gives ``[]``.
Statements run on a numpy tensor of shape ``(2,)*n + (batch,)``; a quantum case
fixes the control axis and runs each branch on its half of the tensor.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from pbpc.frontend import ast as A
from pbpc.statevec import apply_1q, basis_batch, gate_matrix, num_qubits, reduce_angle

DEFAULT_MAX_DEPTH = 10**6


class EvalError(Exception):
    pass


class Diverged(Exception):
    """Raised when a run exceeds the call-depth bound."""


class RunFailed(Exception):
    """A basis run ended in the error configuration."""


# -- expressions -------------------------------------------------------------


def eval_int(e: A.IntExpr, l: list[int]) -> int:
    if isinstance(e, A.IntLit):
        return e.value
    if isinstance(e, A.IntBin):
        v = eval_int(e.left, l)
        return v + e.right if e.op == "+" else v - e.right
    if isinstance(e, A.Size):
        return len(eval_set(e.set, l))
    if isinstance(e, A.IntVar):
        raise EvalError(f"unbound integer variable {e.name!r}")
    raise TypeError(e)


_CMP = {
    ">=": lambda a, b: a >= b,
    "<=": lambda a, b: a <= b,
    "=": lambda a, b: a == b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "!=": lambda a, b: a != b,
}


def eval_bool(b: A.BoolExpr, l: list[int]) -> bool:
    if isinstance(b, A.Compare):
        return _CMP[b.op](eval_int(b.left, l), eval_int(b.right, l))
    if isinstance(b, A.BoolAnd):
        return eval_bool(b.left, l) and eval_bool(b.right, l)
    if isinstance(b, A.BoolOr):
        return eval_bool(b.left, l) or eval_bool(b.right, l)
    if isinstance(b, A.BoolNot):
        return not eval_bool(b.arg, l)
    raise TypeError(b)


def eval_set(s: A.SetExpr, l: list[int]) -> list[int]:
    if isinstance(s, A.SetVar):
        return list(l)
    if isinstance(s, A.Remove):
        xs = eval_set(s.base, l)
        k = eval_int(s.index, l)
        if 1 <= k <= len(xs):
            return xs[: k - 1] + xs[k:]
        return []
    if isinstance(s, A.RemoveMany):
        raise EvalError("multi-index removal must be desugared first")
    raise TypeError(s)


def eval_qubit(q: A.Qubit, l: list[int]) -> int:
    xs = eval_set(q.base, l)
    k = eval_int(q.index, l)
    return xs[k - 1] if 1 <= k <= len(xs) else 0


def eval_expr(e, l: list[int]):
    """Evaluate any expression under pointer list ``l``."""
    if isinstance(e, (A.IntLit, A.IntVar, A.IntBin, A.Size)):
        return eval_int(e, l)
    if isinstance(e, (A.Compare, A.BoolAnd, A.BoolOr, A.BoolNot)):
        return eval_bool(e, l)
    if isinstance(e, (A.SetVar, A.Remove, A.RemoveMany)):
        return eval_set(e, l)
    if isinstance(e, A.Qubit):
        return eval_qubit(e, l)
    raise TypeError(e)


def eval_phase(f: A.PhaseFn | None, k: int) -> float | None:
    if f is None:
        return None
    if isinstance(f, A.PhaseConst):
        return reduce_angle(f.a * math.pi / f.b)
    return reduce_angle(math.ldexp(f.a * math.pi, -(k + f.c)))


def unitary_of(s: A.Unitary, l: list[int]) -> tuple[str, float | None]:
    """Gate kind and evaluated angle of a unitary application."""
    k = eval_int(s.arg, l) if s.arg is not None else 0
    return s.gate, eval_phase(s.phase, k)


# -- statements --------------------------------------------------------------


class Outcome(enum.Enum):
    DONE = "done"
    ERROR = "error"
    DIVERGED = "diverged"


@dataclass
class Configuration:
    control: object  # a Statement, or an Outcome once evaluated
    state: np.ndarray
    accessible: frozenset
    pointers: list = field(default_factory=list)


@dataclass
class RunResult:
    outcome: Outcome
    state: np.ndarray
    time: int

    @property
    def ok(self) -> bool:
        return self.outcome is Outcome.DONE


class _Machine:
    def __init__(self, decls: dict[str, A.Statement], max_depth: int):
        self.decls = decls
        self.max_depth = max_depth
        self.depth = 0

    def run(self, s, v: np.ndarray, blocked: frozenset, l: list[int]) -> tuple[bool, int]:
        if isinstance(s, A.Skip):
            return True, 0
        if isinstance(s, A.Unitary):
            w = eval_qubit(s.target, l)
            if w == 0 or w in blocked:
                return False, 0
            kind, theta = unitary_of(s, l)
            apply_1q(v, w - 1, kind, gate_matrix(kind, theta))
            return True, 0
        if isinstance(s, A.Seq):
            ok, m1 = self.run(s.first, v, blocked, l)
            if not ok:
                return False, m1
            ok, m2 = self.run(s.second, v, blocked, l)
            return ok, m1 + m2
        if isinstance(s, A.If):
            branch = s.then if eval_bool(s.cond, l) else s.orelse
            return self.run(branch, v, blocked, l)
        if isinstance(s, A.QCase):
            w = eval_qubit(s.control, l)
            if w == 0 or w in blocked:
                return False, 0
            inner = blocked | {w}
            lead = (slice(None),) * (w - 1)
            ok0, m0 = self.run(s.branch0, v[lead + (slice(0, 1),)], inner, l)
            if not ok0:
                return False, m0
            ok1, m1 = self.run(s.branch1, v[lead + (slice(1, 2),)], inner, l)
            return ok1, max(m0, m1)
        if isinstance(s, A.Call):
            l2 = eval_set(s.arg, l)
            if not l2:
                return True, 1
            self.depth += 1
            if self.depth > self.max_depth:
                raise Diverged(f"more than {self.max_depth} nested calls")
            try:
                ok, m = self.run(self.decls[s.proc], v, blocked, l2)
            finally:
                self.depth -= 1
            return ok, m + 1
        raise TypeError(f"statement must be desugared: {s!r}")


def _decl_map(decls) -> dict[str, A.Statement]:
    if isinstance(decls, A.Program):
        decls = decls.decls
    if isinstance(decls, dict):
        return decls
    return {d.name: d.body for d in decls}


def _execute(s, state: np.ndarray, decls, blocked: frozenset, l: list[int], max_depth: int) -> RunResult:
    flat = state.ndim == 1
    n = num_qubits(state)
    batch = 1 if flat else state.shape[1]
    work = np.array(state, dtype=complex).reshape((2,) * n + (batch,))
    machine = _Machine(_decl_map(decls), max_depth)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        ok, m = machine.run(s, work, blocked, l)
    except (RecursionError, Diverged):
        return RunResult(Outcome.DIVERGED, state, 0)
    finally:
        sys.setrecursionlimit(old)
    if not ok:
        return RunResult(Outcome.ERROR, state, m)
    out = work.reshape(state.shape)
    return RunResult(Outcome.DONE, out, m)


def exec_statement(s: A.Statement, cfg: Configuration, decls, max_depth: int = DEFAULT_MAX_DEPTH):
    """Big-step execution of ``s`` from ``cfg``; returns ``(final cfg, time)``."""
    n = num_qubits(cfg.state)
    blocked = frozenset(range(1, n + 1)) - frozenset(cfg.accessible)
    r = _execute(s, cfg.state, decls, blocked, list(cfg.pointers), max_depth)
    return Configuration(r.outcome, r.state, cfg.accessible, cfg.pointers), r.time


def run_program(p: A.Program, state: np.ndarray, max_depth: int = DEFAULT_MAX_DEPTH) -> RunResult:
    """Run the program body from the initial configuration on ``state``.

    ``state`` may carry a trailing batch axis; every column runs through the
    same derivation since branching only inspects pointer lists.
    """
    n = num_qubits(state)
    return _execute(p.body, state, p, frozenset(), list(range(1, n + 1)), max_depth)


# -- time complexity ---------------------------------------------------------


class _TimeCounter:
    """Structural evaluation of the call-count without touching amplitudes."""

    def __init__(self, decls: dict[str, A.Statement], max_depth: int):
        self.decls = decls
        self.memo: dict = {}
        self.max_depth = max_depth
        self.depth = 0

    def time(self, s, blocked: frozenset, l: tuple) -> int:
        if isinstance(s, (A.Skip,)):
            return 0
        if isinstance(s, A.Unitary):
            w = eval_qubit(s.target, list(l))
            if w == 0 or w in blocked:
                raise RunFailed(f"gate target outside the accessible wires at pointers {list(l)}")
            return 0
        if isinstance(s, A.Seq):
            return self.time(s.first, blocked, l) + self.time(s.second, blocked, l)
        if isinstance(s, A.If):
            return self.time(s.then if eval_bool(s.cond, list(l)) else s.orelse, blocked, l)
        if isinstance(s, A.QCase):
            w = eval_qubit(s.control, list(l))
            if w == 0 or w in blocked:
                raise RunFailed(f"qcase control outside the accessible wires at pointers {list(l)}")
            inner = blocked | {w}
            return max(self.time(s.branch0, inner, l), self.time(s.branch1, inner, l))
        if isinstance(s, A.Call):
            l2 = tuple(eval_set(s.arg, list(l)))
            if not l2:
                return 1
            body = self.decls[s.proc]
            key = (s.proc, l2, blocked & frozenset(l2))
            if key not in self.memo:
                self.depth += 1
                if self.depth > self.max_depth:
                    raise Diverged(f"more than {self.max_depth} nested calls")
                self.memo[key] = None  # re-entry on the same key means a cycle
                self.memo[key] = self.time(body, key[2], l2)
                self.depth -= 1
            elif self.memo[key] is None:
                raise Diverged(f"call to {s.proc} on {list(l2)} recurses on itself")
            return self.memo[key] + 1
        raise TypeError(s)


def static_time(p: A.Program, n: int, max_depth: int = DEFAULT_MAX_DEPTH) -> int:
    """Symbolic Time_P(n); raises RunFailed on erroneous sizes, Diverged on cycles."""
    tc = _TimeCounter(_decl_map(p), max_depth)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        return tc.time(p.body, frozenset(), tuple(range(1, n + 1)))
    except RecursionError as exc:
        raise Diverged("recursion too deep") from exc
    finally:
        sys.setrecursionlimit(old)


def brute_force_time(p: A.Program, n: int, max_depth: int = DEFAULT_MAX_DEPTH, chunk: int = 256) -> int:
    """Max of the witnessed call count over every basis input of size ``n``."""
    best = 0
    basis = basis_batch(n)
    for start in range(0, 2**n, chunk):
        r = run_program(p, basis[:, start : start + chunk], max_depth)
        if r.outcome is Outcome.DIVERGED:
            raise Diverged(f"run diverged at n={n}")
        if r.outcome is Outcome.ERROR:
            raise RunFailed(f"run ends in error at n={n}")
        best = max(best, r.time)
    return best


def time_complexity(p: A.Program, n: int, method: str = "symbolic", max_depth: int = DEFAULT_MAX_DEPTH) -> int:
    if method == "symbolic":
        return static_time(p, n, max_depth)
    if method == "brute":
        return brute_force_time(p, n, max_depth)
    raise ValueError(f"unknown method {method!r}")
