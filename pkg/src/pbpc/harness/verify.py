from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from pbpc.circuit import max_deviation, run_circuit
from pbpc.compiler import compile_program
from pbpc.semantics import run_program
from pbpc.statevec import basis_batch, random_states

DEFAULT_SEED = 0xC0FFEE


class RunError(RuntimeError):
    pass


@dataclass
class VerifyReport:
    program: str
    n: int
    strategy: str
    trials: int
    basis_states: int
    max_deviation: float
    ancilla_leak: float
    tol: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def input_states(n: int, trials: int, seed: int, basis_limit: int = 256) -> tuple[np.ndarray, int]:
    rng = np.random.default_rng(seed)
    cols = [random_states(n, trials, rng)] if trials else []
    nb = 0
    if 2**n <= basis_limit:
        cols.append(basis_batch(n))
        nb = 2**n
    if not cols:
        return np.zeros((2**n, 0), dtype=complex), 0
    return np.concatenate(cols, axis=1), nb


def verify_equivalence(
    p,
    n: int,
    trials: int = 20,
    tol: float = 1e-9,
    strategy: str = "merge",
    seed: int = DEFAULT_SEED,
    basis_limit: int = 256,
    program_id: str = "<program>",
    chunk: int = 64,
) -> VerifyReport:
    """Compare the compiled circuit with the interpreter on seeded random states
    and, when ``2**n <= basis_limit``, on every basis state."""
    circ = compile_program(p, n, strategy).circuit
    states, nb = input_states(n, trials, seed, basis_limit)
    dev = leak = 0.0
    for start in range(0, states.shape[1], chunk):
        psi = states[:, start : start + chunk]
        ref = run_program(p, psi)
        if not ref.ok:
            raise RunError(f"interpreter run ended in {ref.outcome.value} at n={n}")
        got, lk = run_circuit(c=circ, psi=psi)
        leak += lk
        # leaked amplitudes count against the max-norm through sqrt(weight)
        dev = max(dev, max_deviation(got, ref.state), float(np.sqrt(lk)))
    return VerifyReport(program_id, n, strategy, trials, nb, dev, leak, tol, dev <= tol)
