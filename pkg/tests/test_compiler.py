import cmath
import math

import numpy as np
import pytest

from helpers import prog
from pbpc.analysis import Analysis
from pbpc.circuit import Circuit, Gate, circuit_matrix, circuit_size, run_circuit, serialize
from pbpc.compiler import (
    CompileError,
    ControlledStatement,
    OrthogonalityChecker,
    OrthogonalityError,
    compile_baseline,
    compile_program,
    compile_swap,
    procedure_split,
    seq_decompose,
)
from pbpc.compiler.orthogonality import syntactic_conflict
from pbpc.frontend import ast as A, load_program
from pbpc.harness.bench import fit_exponent
from pbpc.semantics import run_program
from pbpc.statevec import basis_batch, random_states

QS = A.SetVar()


def _unitary_on_inputs(c):
    out, leak = run_circuit(c, basis_batch(c.wires))
    assert leak < 1e-18
    return out


def test_trivial_not():
    out = compile_program(load_program(":: qs[1] *= NOT;"), 1)
    assert len(out.circuit.gates) == 1 and out.circuit.total_wires == 1
    assert out.stats["size"] == 2 == circuit_size(out.circuit)


def _hand_qft(n):
    """H, controlled phase ladder into wire 1, cyclic shift, then the first m-1 wires."""
    gates = []
    for m in range(n, 0, -1):
        gates.append(Gate.make("H", 1))
        for k in range(m, 1, -1):
            gates.append(Gate.make("PH", 1, {k: 1}, math.pi / 2 ** (k - 1)))
        for k in range(m, 1, -1):
            gates += [Gate.make("NOT", k, {1: 1}), Gate.make("NOT", 1, {k: 1}), Gate.make("NOT", k, {1: 1})]
    return Circuit(n, 0, gates)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_qft_matches_hand_circuit_and_dft(n):
    got = _unitary_on_inputs(compile_program(prog("qft"), n).circuit)
    assert np.max(np.abs(got - circuit_matrix(_hand_qft(n)))) <= 1e-9
    N = 2**n
    dft = np.array([[cmath.exp(2j * cmath.pi * j * k / N) for k in range(N)] for j in range(N)]) / math.sqrt(N)
    assert np.max(np.abs(got - dft)) <= 1e-9


def _anchor_oracle(children, n):
    """(anchors, merges) from the recursion tree: a size anchors once, repeats merge."""
    seen, events, todo = set(), 0, [n]
    while todo:
        m = todo.pop()
        for k in children(m):
            if k <= 0:
                continue  # nil call
            events += 1
            if k not in seen:
                seen.add(k)
                todo.append(k)
    return len(seen), events - len(seen)


@pytest.mark.parametrize(
    "ident, children",
    [
        ("pairs", lambda m: [m - 2, m - 2] if m >= 2 else []),
        ("rec", lambda m: [m - 1, m - 2] if m > 2 else []),
    ],
)
@pytest.mark.parametrize("n", [3, 6, 9, 12])
def test_anchor_and_merge_counts(ident, children, n):
    s = compile_program(prog(ident), n).stats
    anchors, merges = _anchor_oracle(children, n)
    assert (s["ancilla_count"], s["anchor_events"], s["merge_events"]) == (anchors, anchors, merges)


def test_pairs_six():
    out = compile_program(prog("pairs"), 6)
    assert out.stats["ancilla_count"] == 2 and out.stats["merge_events"] == 2
    assert [(p, k) for _, p, k in out.circuit.anchors] == [("pairs", 4), ("pairs", 2)]


def test_rec_first_anchors():
    anchors = compile_program(prog("rec"), 8).circuit.anchors
    assert anchors[:2] == [(9, "rec", 7), (10, "rec", 6)]


def test_single_recursion_never_merges():
    p = load_program("decl f(qs) { if |qs| > 1 then { qs[1] *= H; call f(qs - [1]); } else qs[1] *= NOT; } :: call f(qs);")
    for n in (2, 5, 9):
        s = compile_program(p, n).stats
        assert s["merge_events"] == 0 and s["ancilla_count"] == n - 1


def test_pairs_linear_size():
    sizes = [(n, compile_program(prog("pairs"), n, check_orthogonality=False).stats["size"]) for n in range(8, 257, 8)]
    slope, _ = fit_exponent(sizes[len(sizes) // 2 :])
    assert abs(slope - 1.0) <= 0.15


def test_seq_examples():
    cs = {9: 1}
    l = [1, 2]
    assert seq_decompose(cs, A.Skip(), l) == []
    u = A.Unitary(A.Qubit(QS, A.IntLit(2)), "H")
    call = A.Call("p", A.Remove(QS, A.IntLit(1)))
    assert seq_decompose(cs, A.Seq(u, call), l) == seq_decompose(cs, u, l) + seq_decompose(cs, call, l)
    q = A.QCase(A.Qubit(QS, A.IntLit(1)), u, call)
    assert seq_decompose(cs, q, l) == [
        ControlledStatement({9: 1, 1: 0}, u, l),
        ControlledStatement({9: 1, 1: 1}, call, l),
    ]
    cond = A.If(A.Compare(">", A.Size(QS), A.IntLit(5)), u, call)
    assert seq_decompose(cs, cond, l) == [ControlledStatement(cs, call, l)]


def test_procedure_split():
    an = Analysis(prog("qft"))
    u = ControlledStatement({}, A.Unitary(A.Qubit(QS, A.IntLit(1)), "H"), [1, 2])
    rot = ControlledStatement({1: 0}, A.Call("rot", QS), [1, 2])
    shift = ControlledStatement({1: 1}, A.Call("shift", QS), [1, 2])
    rest, fams = procedure_split([u, u], an)
    assert rest == [u, u] and fams == []
    rest, fams = procedure_split([u, rot, shift], an)
    assert rest == [u] and fams == [("rot", [rot]), ("shift", [shift])]
    pc = ControlledStatement({}, A.Call("pairs", QS), [1])
    assert procedure_split([pc], Analysis(prog("pairs"))) == ([], [("pairs", [pc])])


@pytest.mark.parametrize("n", [3, 5, 8, 11])
def test_baseline_count_equals_materialized(n):
    for ident in ("pairs", "qft", "rec", "sum(2)", "chained(1)"):
        cnt = compile_baseline(prog(ident), n, materialize=False)
        out = compile_baseline(prog(ident), n)
        assert cnt.size == out.stats["size"] and cnt.gates == len(out.circuit.gates)


def test_baseline_equals_merge_without_calls():
    p = load_program(":: qs[1] *= H; qcase qs[1] of { 0 -> qs[2] *= NOT; 1 -> qcase qs[3] of { 0 -> skip; 1 -> qs[2] *= H; } }")
    assert compile_baseline(p, 3).circuit.gates == compile_program(p, 3).circuit.gates


def test_baseline_chained_superlinear():
    pts = [(n, compile_baseline(prog("chained(1)"), n, materialize=False).size) for n in range(8, 65, 4)]
    slope, _ = fit_exponent(pts[len(pts) // 2 :])
    assert slope >= 2.5


@pytest.mark.parametrize("ident, n, strategy", [("pairs", 9, "merge"), ("qft", 6, "merge"), ("rec", 8, "swap"), ("skew", 7, "swap")])
def test_deterministic(ident, n, strategy):
    a = compile_program(prog(ident), n, strategy)
    b = compile_program(prog(ident), n, strategy)
    assert serialize(a.circuit) == serialize(b.circuit) and a.stats == b.stats


@pytest.mark.parametrize("strategy", ["merge", "swap"])
def test_width_two_rejected(strategy):
    with pytest.raises(CompileError, match="width"):
        compile_program(prog("width2"), 4, strategy)


def test_width_two_sequential_is_sound():
    p = prog("width2")
    psi = random_states(4, 5, np.random.default_rng(2))
    got, _ = run_circuit(compile_program(p, 4, "sequential").circuit, psi)
    assert np.max(np.abs(got - run_program(p, psi).state)) <= 1e-9


def test_erroneous_size():
    with pytest.raises(CompileError, match="erroneous"):
        compile_program(load_program(":: qs[3] *= NOT;"), 2)
    assert compile_program(load_program(":: qs[3] *= NOT;"), 3).stats["size"] == 4


def test_unknown_strategy():
    with pytest.raises(CompileError):
        compile_program(prog("pairs"), 4, "parallel")


def test_not_wf_rejected():
    with pytest.raises(CompileError):
        compile_program(load_program("decl f(qs) { call f(qs); } :: call f(qs);"), 3, "sequential")


def test_skew_needs_swap():
    with pytest.raises(CompileError):
        compile_program(prog("skew"), 5, "merge")


@pytest.mark.parametrize("n", range(3, 11))
def test_skew_swap_sound(n):
    p = prog("skew")
    out = compile_swap(p, n)
    assert out.stats["permutation_blocks"] >= 1 or n < 5
    psi = random_states(n, 10, np.random.default_rng(n))
    got, leak = run_circuit(out.circuit, psi)
    assert leak < 1e-18
    assert np.max(np.abs(got - run_program(p, psi).state)) <= 1e-9


@pytest.mark.parametrize("ident", ["pairs", "qft", "add", "sum(2)", "rec"])
def test_swap_on_basic_programs_adds_nothing(ident):
    n = 7
    a, b = compile_program(prog(ident), n, "merge"), compile_program(prog(ident), n, "swap")
    assert serialize(a.circuit) == serialize(b.circuit)
    assert b.stats["permutation_blocks"] == 0


def test_orthogonality_checker():
    assert syntactic_conflict({1: 0, 2: 1}, {2: 0})
    assert not syntactic_conflict({1: 0}, {2: 0})
    chk = OrthogonalityChecker(3)
    chk.flip(4, {1: 1, 2: 0})
    chk.flip(4, {1: 0, 3: 1})
    # ancilla 4 holds x1.~x2 xor ~x1.x3
    assert chk.orthogonal({4: 1}, {1: 1, 2: 1})
    assert chk.orthogonal({4: 1}, {1: 0, 3: 0})
    assert not chk.orthogonal({4: 1}, {2: 0})
    chk.require({4: 1, 2: 1, 1: 1}, [{4: 1, 1: 0}, {1: 1, 2: 0}])
    with pytest.raises(OrthogonalityError):
        chk.require({4: 1}, [{3: 1}])


def test_checker_disabled_is_silent():
    chk = OrthogonalityChecker(2, enabled=False)
    chk.require({1: 1}, [{1: 1}])
    assert chk.checks == 0
