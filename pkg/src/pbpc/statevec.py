"""Small state-vector toolkit shared by the interpreter and the simulators.

States are numpy arrays of length ``2**n`` (or ``(2**n, batch)``).  Wire 1 is
the most significant bit of the basis index, so reshaping to ``(2,)*n`` puts
wire ``w`` on axis ``w - 1``.
"""

from __future__ import annotations

import json
import math

import numpy as np

TWO_PI = 2 * math.pi
_SQRT_HALF = 1 / math.sqrt(2)


def gate_matrix(kind: str, theta: float | None = None) -> np.ndarray:
    if kind == "NOT":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "H":
        return _SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex)
    if kind == "PH":
        return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)
    if kind == "RY":
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    raise ValueError(f"unknown gate {kind!r}")


def reduce_angle(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0:
        t += TWO_PI
    return 0.0 if t >= TWO_PI else t


def apply_1q(view: np.ndarray, axis: int, kind: str, mat: np.ndarray) -> None:
    """Apply a one-qubit gate in place along ``axis`` of ``view``."""
    lead = (slice(None),) * axis
    a = view[lead + (0,)]
    b = view[lead + (1,)]
    if kind == "NOT":
        tmp = a.copy()
        a[...] = b
        b[...] = tmp
        return
    if kind == "PH":
        b *= mat[1, 1]
        return
    a0 = a.copy()
    a *= mat[0, 0]
    a += mat[0, 1] * b
    b *= mat[1, 1]
    b += mat[1, 0] * a0


def num_qubits(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"state length {dim} is not a power of two")
    return n


def basis_state(bits: str) -> np.ndarray:
    if bits and set(bits) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {bits!r}")
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2) if bits else 0] = 1
    return v


def basis_batch(n: int) -> np.ndarray:
    """All basis states of ``n`` qubits as the columns of an identity matrix."""
    return np.eye(2**n, dtype=complex)


def random_states(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` normalized complex-Gaussian states, as columns."""
    m = rng.normal(size=(2**n, count)) + 1j * rng.normal(size=(2**n, count))
    return m / np.linalg.norm(m, axis=0)


def parse_state(text: str) -> np.ndarray:
    """Bitstring (``0101``) or JSON array of ``[re, im]`` pairs."""
    text = text.strip()
    if text.startswith("["):
        pairs = json.loads(text)
        v = np.array([complex(re, im) for re, im in pairs])
        num_qubits(v)
        return v
    return basis_state(text)


def format_state(v: np.ndarray, tol: float = 1e-12) -> list[dict]:
    n = num_qubits(v)
    out = []
    for i, amp in enumerate(v):
        if abs(amp) > tol:
            out.append({"basis": format(i, f"0{n}b") if n else "", "re": amp.real, "im": amp.imag})
    return out
