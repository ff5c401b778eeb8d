import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import oracle_matrix, prog
from pbpc.circuit import (
    Circuit,
    CircuitError,
    Gate,
    apply_circuit,
    circuit_depth,
    circuit_matrix,
    circuit_size,
    deserialize,
    embed_with_ancillas,
    gate_full_matrix,
    gate_unitary,
    run_circuit,
    serialize,
    simulate,
    simulate_branches,
    split_ancillas,
)
from pbpc.compiler import compile_program
from pbpc.statevec import basis_state, random_states


def test_ph_dyadic_is_s_gate():
    theta = math.pi / 2 ** (2 - 1)
    assert np.allclose(gate_unitary(Gate.make("PH", 1, theta=theta)), [[1, 0], [0, 1j]])


@pytest.mark.parametrize(
    "gate, mat",
    [
        (Gate.make("NOT", 1), [[0, 1], [1, 0]]),
        (Gate.make("H", 1), np.array([[1, 1], [1, -1]]) / math.sqrt(2)),
        (Gate.make("PH", 1, theta=0.0), np.eye(2)),
        (Gate.make("RY", 1, theta=math.pi), [[0, -1], [1, 0]]),
    ],
)
def test_gate_unitary(gate, mat):
    assert np.allclose(gate_unitary(gate), mat, atol=1e-15)


@pytest.mark.parametrize(
    "controls, inp, out",
    [({1: 1}, "10", "11"), ({1: 1}, "00", "00"), ({1: 0}, "00", "01"), ({1: 0}, "10", "10")],
)
def test_controlled_not(controls, inp, out):
    c = Circuit(2, 0, [Gate.make("NOT", 2, controls)])
    assert np.allclose(apply_circuit(c, basis_state(inp)), basis_state(out))


def test_hadamard_on_zero():
    got = apply_circuit(Circuit(1, 0, [Gate.make("H", 1)]), basis_state("0"))
    assert np.allclose(got, [1 / math.sqrt(2)] * 2)


def test_size_and_depth_examples():
    assert (circuit_size(Circuit(3)), circuit_depth(Circuit(3))) == (3, 0)
    one = Circuit(1, 0, [Gate.make("NOT", 1)])
    assert (circuit_size(one), circuit_depth(one)) == (2, 1)
    assert circuit_depth(Circuit(2, 0, [Gate.make("NOT", 1), Gate.make("H", 2)])) == 1
    assert circuit_depth(Circuit(2, 0, [Gate.make("NOT", 1), Gate.make("H", 2, {1: 1})])) == 2


@pytest.mark.parametrize(
    "kwargs",
    [dict(kind="NOT", target=1, controls=((1, 1),)), dict(kind="FOO", target=1), dict(kind="PH", target=1), dict(kind="PH", target=1, theta=7.0)],
)
def test_gate_invariants(kwargs):
    with pytest.raises(CircuitError):
        Gate(**kwargs)


def test_empty_serialization():
    assert serialize(Circuit(3)) == '{"wires":3,"ancillas":0,"gates":[]}'


@pytest.mark.parametrize(
    "text",
    [
        '{"wires":2,"ancillas":0,"gates":[{"g":"NOT","t":1,"c":[[1,1]]}]}',
        '{"wires":2,"ancillas":0,"gates":[{"g":"NOT","t":3,"c":[]}]}',
        '{"wires":2,"gates":[]}',
        "[1, 2]",
        "not json",
    ],
)
def test_deserialize_rejects(text):
    with pytest.raises(CircuitError):
        deserialize(text)


def test_compiled_qft_roundtrip():
    c = compile_program(prog("qft"), 4).circuit
    back = deserialize(serialize(c))
    assert back == c
    assert serialize(back) == serialize(c)
    assert (circuit_size(back), circuit_depth(back)) == (circuit_size(c), circuit_depth(c))


@st.composite
def circuits(draw, max_wires=6, kinds=("NOT", "H", "RY", "PH")):
    wires = draw(st.integers(1, max_wires))
    anc = draw(st.integers(0, max_wires - wires))
    total = wires + anc
    gates = []
    for _ in range(draw(st.integers(0, 10))):
        kind = draw(st.sampled_from(kinds))
        t = draw(st.integers(1, total))
        others = [w for w in range(1, total + 1) if w != t]
        cw = draw(st.lists(st.sampled_from(others), unique=True, max_size=min(3, len(others)))) if others else []
        cs = {w: draw(st.integers(0, 1)) for w in cw}
        theta = draw(st.floats(0, 6.28)) if kind in ("RY", "PH") else None
        gates.append(Gate.make(kind, t, cs, theta))
    return Circuit(wires, anc, gates)


@given(circuits())
@settings(max_examples=150, deadline=None)
def test_dense_oracle_agreement(c):
    u = oracle_matrix(c)
    assert np.max(np.abs(circuit_matrix(c) - u)) <= 1e-9
    psi = random_states(c.total_wires, 3, np.random.default_rng(len(c.gates)))
    assert np.max(np.abs(apply_circuit(c, psi) - u @ psi)) <= 1e-9


@given(circuits())
@settings(max_examples=100, deadline=None)
def test_norm_and_roundtrip(c):
    psi = random_states(c.total_wires, 2, np.random.default_rng(0))
    out = apply_circuit(c, psi)
    assert np.max(np.abs(np.linalg.norm(out, axis=0) - 1)) <= 1e-9
    back = deserialize(serialize(c))
    assert back == c
    assert (circuit_size(back), circuit_depth(back)) == (circuit_size(c), circuit_depth(c))


@st.composite
def not_only_on_ancillas(draw):
    c = draw(circuits())
    gates = [g if g.target <= c.wires else Gate.make("NOT", g.target, dict(g.controls)) for g in c.gates]
    return Circuit(c.wires, c.ancillas, gates)


@given(not_only_on_ancillas())
@settings(max_examples=150, deadline=None)
def test_branch_simulator_matches_dense(c):
    psi = random_states(c.wires, 2, np.random.default_rng(3))
    dense = apply_circuit(c, embed_with_ancillas(psi, c.ancillas))
    want, want_leak = split_ancillas(dense, c.ancillas)
    got, leak = simulate_branches(c, psi)
    assert np.max(np.abs(got - want)) <= 1e-9
    assert abs(leak - want_leak) <= 1e-9
    got, leak = run_circuit(c, psi)
    assert np.max(np.abs(got - want)) <= 1e-9


@pytest.mark.parametrize("ident, n", [("pairs", 5), ("qft", 4), ("add", 7), ("rec", 6), ("sum(2)", 5)])
def test_compiled_simulators_agree(ident, n):
    c = compile_program(prog(ident), n).circuit
    psi = random_states(n, 4, np.random.default_rng(n))
    want, leak = split_ancillas(apply_circuit(c, embed_with_ancillas(psi, c.ancillas)), c.ancillas)
    assert leak < 1e-18
    got, _ = simulate_branches(c, psi)
    assert np.max(np.abs(got - want)) <= 1e-12
    if ident != "rec":
        assert np.max(np.abs(simulate(c, psi) - want)) <= 1e-12


def test_full_matrix_of_controlled_gate():
    g = Gate.make("NOT", 1, {2: 1})
    want = np.eye(4)[[0, 3, 2, 1]]
    assert np.allclose(gate_full_matrix(g, 2), want)
