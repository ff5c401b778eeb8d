"""Circuit IR of multi-controlled one-qubit gates, metrics and simulators.

Wires ``1..wires`` carry the program input; ancillas follow as
``wires+1 .. wires+ancillas`` and start (and must end) in ``|0>``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from pbpc.statevec import apply_1q, gate_matrix, num_qubits

GATE_KINDS = ("NOT", "H", "RY", "PH")


class CircuitError(ValueError):
    pass


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    controls: tuple = ()  # sorted ((wire, polarity), ...)
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate {self.kind!r}")
        wires = [w for w, _ in self.controls]
        if self.target in wires:
            raise CircuitError(f"gate target {self.target} is also a control")
        if len(set(wires)) != len(wires):
            raise CircuitError("repeated control wire")
        if any(p not in (0, 1) for _, p in self.controls):
            raise CircuitError("control polarity must be 0 or 1")
        if (self.theta is None) != (self.kind in ("NOT", "H")):
            raise CircuitError(f"{self.kind} angle mismatch")
        if self.theta is not None and not 0 <= self.theta < 2 * math.pi:
            raise CircuitError(f"angle {self.theta} outside [0, 2pi)")

    @staticmethod
    def make(kind: str, target: int, controls=None, theta: float | None = None) -> "Gate":
        cs = tuple(sorted(dict(controls or {}).items()))
        return Gate(kind, target, cs, theta)

    @property
    def wires(self) -> tuple[int, ...]:
        return (self.target,) + tuple(w for w, _ in self.controls)

    def matrix(self) -> np.ndarray:
        return gate_matrix(self.kind, self.theta)


@dataclass
class Circuit:
    wires: int
    ancillas: int = 0
    gates: list = field(default_factory=list)
    anchors: list = field(default_factory=list)  # (wire, proc, size)

    @property
    def total_wires(self) -> int:
        return self.wires + self.ancillas

    def validate(self) -> None:
        for g in self.gates:
            for w in g.wires:
                if not 1 <= w <= self.total_wires:
                    raise CircuitError(f"gate references wire {w} outside 1..{self.total_wires}")


def gate_unitary(g: Gate) -> np.ndarray:
    return g.matrix()


# -- metrics -----------------------------------------------------------------


def circuit_size(c: Circuit) -> int:
    return len(c.gates) + c.total_wires


def circuit_depth(c: Circuit) -> int:
    level: dict[int, int] = {}
    depth = 0
    for g in c.gates:
        d = 1 + max((level.get(w, 0) for w in g.wires), default=0)
        for w in g.wires:
            level[w] = d
        depth = max(depth, d)
    return depth


def lowered_size(c: Circuit) -> int:
    """Gate count after expanding a k-controlled gate at cost 2k-1 (plus wires)."""
    return sum(max(1, 2 * len(g.controls) - 1) for g in c.gates) + c.total_wires


# -- dense simulation --------------------------------------------------------


def _apply_gate_dense(t: np.ndarray, g: Gate) -> None:
    idx = [slice(None)] * (t.ndim)
    for w, p in g.controls:
        idx[w - 1] = p
    axis = (g.target - 1) - sum(1 for w, _ in g.controls if w < g.target)
    apply_1q(t[tuple(idx)], axis, g.kind, g.matrix())


def apply_circuit(c: Circuit, psi: np.ndarray) -> np.ndarray:
    """Apply every gate to ``psi``, a state over all ``wires + ancillas`` qubits."""
    n = num_qubits(psi)
    if n != c.total_wires:
        raise CircuitError(f"state has {n} qubits, circuit has {c.total_wires} wires")
    batch = 1 if psi.ndim == 1 else psi.shape[1]
    t = np.array(psi, dtype=complex).reshape((2,) * n + (batch,))
    for g in c.gates:
        _apply_gate_dense(t, g)
    return t.reshape(psi.shape)


def gate_full_matrix(g: Gate, n: int) -> np.ndarray:
    """The ``2**n`` square matrix of ``g``, assembled from projectors and Kronecker products."""
    eye = np.eye(2, dtype=complex)
    proj = [np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex)]
    cmap = dict(g.controls)

    def kron_all(mats):
        out = np.ones((1, 1), dtype=complex)
        for m in mats:
            out = np.kron(out, m)
        return out

    on = kron_all([g.matrix() if w == g.target else proj[cmap[w]] if w in cmap else eye for w in range(1, n + 1)])
    active = kron_all([eye if w == g.target else proj[cmap[w]] if w in cmap else eye for w in range(1, n + 1)])
    return np.eye(2**n, dtype=complex) - active + on


def circuit_matrix(c: Circuit) -> np.ndarray:
    n = c.total_wires
    u = np.eye(2**n, dtype=complex)
    for g in c.gates:
        u = gate_full_matrix(g, n) @ u
    return u


def embed_with_ancillas(psi: np.ndarray, m: int) -> np.ndarray:
    """``psi ⊗ |0^m>``."""
    if psi.ndim == 1:
        out = np.zeros(psi.shape[0] << m, dtype=complex)
        out[:: 1 << m] = psi
        return out
    out = np.zeros((psi.shape[0] << m, psi.shape[1]), dtype=complex)
    out[:: 1 << m] = psi
    return out


def split_ancillas(phi: np.ndarray, m: int) -> tuple[np.ndarray, float]:
    """Input-register part of ``phi`` and the total weight on nonzero ancilla states."""
    dim = phi.shape[0] >> m
    r = phi.reshape((dim, 1 << m) + phi.shape[1:])
    kept = r[:, 0]
    leak = float(np.sum(np.abs(r[:, 1:]) ** 2))
    return kept, leak


# -- clean-ancilla simulation ------------------------------------------------


def simulate(c: Circuit, psi: np.ndarray, check_restored: bool = True) -> np.ndarray:
    """Simulate ``c`` on ``psi`` (input wires only) with ancillas starting in ``|0>``.

    Every ancilla is tracked as a classical function of the input basis index
    (a boolean array) together with the input wires it reads.  This is exact
    as long as ancillas are only targeted by NOT gates and no gate acts on an
    input wire that a live ancilla reads; otherwise SimulationError is raised
    and the dense :func:`apply_circuit` must be used instead.
    """
    n = c.wires
    if num_qubits(psi) != n:
        raise CircuitError(f"state has {num_qubits(psi)} qubits, circuit has {n} input wires")
    batch = 1 if psi.ndim == 1 else psi.shape[1]
    st = np.array(psi, dtype=complex).reshape((2,) * n + (batch,))
    shape = (2,) * n
    bit_cache: dict[tuple[int, int], np.ndarray] = {}

    def bit(w: int, p: int) -> np.ndarray:
        key = (w, p)
        if key not in bit_cache:
            s = [1] * n
            s[w - 1] = 2
            bit_cache[key] = (np.arange(2) == p).reshape(s)
        return bit_cache[key]

    anc: dict[int, np.ndarray] = {}
    deps: dict[int, frozenset] = {}

    for g in c.gates:
        mask = None
        reads: set[int] = set()
        dead = False
        for w, p in g.controls:
            if w <= n:
                cond = bit(w, p)
                reads.add(w)
            elif w in anc:
                cond = anc[w] if p else ~anc[w]
                reads |= deps[w]
            elif p == 1:
                dead = True  # control on a |0> ancilla
                break
            else:
                continue
            mask = cond if mask is None else mask & cond
        if dead:
            continue
        t = g.target
        if t > n:
            if g.kind != "NOT":
                raise SimulationError(f"non-NOT gate {g.kind} on ancilla {t}")
            flip = np.ones(shape, dtype=bool) if mask is None else np.broadcast_to(mask, shape)
            new = flip ^ anc[t] if t in anc else flip.copy()
            if new.any():
                anc[t] = new
                deps[t] = deps.get(t, frozenset()) | reads
            else:
                anc.pop(t, None)
                deps.pop(t, None)
            continue
        for a, ds in deps.items():
            if t in ds:
                raise SimulationError(f"gate on wire {t} while ancilla {a} depends on it")
        if mask is None:
            apply_1q(st, t - 1, g.kind, g.matrix())
            continue
        m = np.broadcast_to(mask, shape).take(0, axis=t - 1)[..., None]
        if not m.any():
            continue
        lead = (slice(None),) * (t - 1)
        a = st[lead + (0,)]
        b = st[lead + (1,)]
        u = g.matrix()
        na = u[0, 0] * a + u[0, 1] * b
        nb = u[1, 0] * a + u[1, 1] * b
        a[...] = np.where(m, na, a)
        b[...] = np.where(m, nb, b)
    if check_restored and anc:
        raise SimulationError(f"ancillas {sorted(anc)} not restored to |0>")
    return st.reshape(psi.shape)


def simulate_branches(c: Circuit, psi: np.ndarray) -> tuple[np.ndarray, float]:
    """Exact simulation keeping one input-register tensor per ancilla bitstring.

    Ancillas may only be targeted by NOT gates, so the joint state is a sum
    over classical ancilla configurations.  Returns the input-register part
    with all ancillas back at 0 and the weight left on other configurations.
    """
    n = c.wires
    if num_qubits(psi) != n:
        raise CircuitError(f"state has {num_qubits(psi)} qubits, circuit has {n} input wires")
    batch = 1 if psi.ndim == 1 else psi.shape[1]
    branches = {0: np.array(psi, dtype=complex).reshape((2,) * n + (batch,))}
    masks: dict[tuple[int, int], np.ndarray] = {}

    def bit(w: int, p: int) -> np.ndarray:
        if (w, p) not in masks:
            s = [1] * (n + 1)
            s[w - 1] = 2
            masks[(w, p)] = (np.arange(2) == p).reshape(s)
        return masks[(w, p)]

    for g in c.gates:
        mask = None
        need = flip = 0
        for w, p in g.controls:
            if w <= n:
                mask = bit(w, p) if mask is None else mask & bit(w, p)
            else:
                need |= 1 << (w - n - 1)
                flip |= p << (w - n - 1)
        hits = [k for k in branches if k & need == flip]
        t = g.target
        if t > n:
            if g.kind != "NOT":
                raise SimulationError(f"non-NOT gate {g.kind} on ancilla {t}")
            tb = 1 << (t - n - 1)
            moved = {}
            for k in hits:
                v = branches.pop(k)
                if mask is None:
                    moved[k ^ tb] = v
                    continue
                moved[k ^ tb] = np.where(mask, v, 0)
                stay = np.where(mask, 0, v)
                branches[k] = branches[k] + stay if k in branches else stay
            for k, v in moved.items():
                branches[k] = branches[k] + v if k in branches else v
            continue
        u = g.matrix()
        for k in hits:
            st = branches[k]
            if mask is None:
                apply_1q(st, t - 1, g.kind, u)
                continue
            m = mask.take(0, axis=t - 1)
            lead = (slice(None),) * (t - 1)
            a = st[lead + (0,)]
            b = st[lead + (1,)]
            na = u[0, 0] * a + u[0, 1] * b
            nb = u[1, 0] * a + u[1, 1] * b
            a[...] = np.where(m, na, a)
            b[...] = np.where(m, nb, b)
    out = branches.get(0, np.zeros((2,) * n + (batch,), dtype=complex)).reshape(psi.shape)
    leak = sum(float(np.sum(np.abs(v) ** 2)) for k, v in branches.items() if k)
    return out, leak


def run_circuit(c: Circuit, psi: np.ndarray, dense_limit: int = 14) -> tuple[np.ndarray, float]:
    """Output on the input wires and the weight left on dirty ancilla states.

    Tries the clean-ancilla simulator first and falls back to the
    per-configuration one, which only needs ancillas to be NOT targets.
    """
    try:
        return simulate(c, psi), 0.0
    except SimulationError:
        pass
    try:
        return simulate_branches(c, psi)
    except SimulationError:
        if c.total_wires > dense_limit:
            raise
    out = apply_circuit(c, embed_with_ancillas(psi, c.ancillas))
    return split_ancillas(out, c.ancillas)


# -- serialization -----------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def serialize(c: Circuit) -> str:
    parts = [f'"wires":{c.wires}', f'"ancillas":{c.ancillas}']
    if c.anchors:
        anchors = ",".join(
            f'{{"wire":{w},"proc":{json.dumps(p)},"size":{s}}}' for w, p, s in c.anchors
        )
        parts.append(f'"anchors":[{anchors}]')
    gates = []
    for g in c.gates:
        fields = [f'"g":"{g.kind}"']
        if g.theta is not None:
            fields.append(f'"theta":{_fmt(g.theta)}')
        fields.append(f'"t":{g.target}')
        fields.append('"c":[' + ",".join(f"[{w},{p}]" for w, p in g.controls) + "]")
        gates.append("{" + ",".join(fields) + "}")
    parts.append('"gates":[' + ",".join(gates) + "]")
    return "{" + ",".join(parts) + "}"


def deserialize(text: str) -> Circuit:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitError(f"invalid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise CircuitError("circuit must be a JSON object")
    for key in ("wires", "ancillas", "gates"):
        if key not in d:
            raise CircuitError(f"missing field {key!r}")
    if not isinstance(d["wires"], int) or not isinstance(d["ancillas"], int) or d["wires"] < 0 or d["ancillas"] < 0:
        raise CircuitError("wires and ancillas must be non-negative integers")
    gates = []
    for i, gd in enumerate(d["gates"]):
        if not isinstance(gd, dict) or "g" not in gd or "t" not in gd:
            raise CircuitError(f"gate {i} is malformed")
        try:
            controls = tuple(sorted((int(w), int(p)) for w, p in gd.get("c", [])))
            theta = gd.get("theta")
            gates.append(Gate(gd["g"], int(gd["t"]), controls, None if theta is None else float(theta)))
        except (TypeError, ValueError) as exc:
            raise CircuitError(f"gate {i}: {exc}") from exc
    anchors = [(int(a["wire"]), str(a["proc"]), int(a["size"])) for a in d.get("anchors", [])]
    c = Circuit(d["wires"], d["ancillas"], gates, anchors)
    c.validate()
    return c


def circuit_stats(c: Circuit) -> dict:
    return {
        "size": circuit_size(c),
        "depth": circuit_depth(c),
        "gates": len(c.gates),
        "wires": c.wires,
        "ancillas": c.ancillas,
        "lowered_size": lowered_size(c),
    }


def max_deviation(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def log2_ceil(n: int) -> int:
    return max(0, math.ceil(math.log2(n))) if n > 0 else 0
