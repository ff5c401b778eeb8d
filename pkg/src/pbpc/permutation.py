"""Controlled wire permutations in logarithmic depth.

A permutation is split into two rounds of disjoint transpositions by
reflecting each cycle ``c_0 -> c_1 -> ... -> c_{L-1}``: first swap
``c_i <-> c_{-i}``, then ``c_i <-> c_{1-i}`` (indices mod L).  The control is
fanned out once to ``k`` copies (``k`` = largest round) by a doubling tree, so
every transposition of a round gets its own copy and the whole round runs in
parallel.  A transposition is CNOT, Toffoli on the copy, CNOT.

Documented bounds (checked by the tests): at most ``4n`` gates and depth at
most ``2*ceil(log2 n) + 6``; both sit inside ``7n`` and ``4*ceil(log2 n) + 4``.
"""

from __future__ import annotations

from pbpc.circuit import Circuit, CircuitError, Gate

GATE_BOUND = 7  # gates <= GATE_BOUND * n
DEPTH_SLOPE, DEPTH_OFFSET = 4, 4  # depth <= DEPTH_SLOPE * ceil(log2 n) + DEPTH_OFFSET


def _cycles(mapping: dict[int, int]) -> list[list[int]]:
    seen, out = set(), []
    for start in sorted(mapping):
        if start in seen or mapping[start] == start:
            seen.add(start)
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = mapping[x]
        out.append(cyc)
    return out


def transposition_rounds(mapping: dict[int, int]) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Two lists of disjoint swaps whose composition (first, then second) moves
    the content of wire ``x`` to wire ``mapping[x]``."""
    if sorted(mapping) != sorted(mapping.values()):
        raise CircuitError("not a bijection")
    first, second = [], []
    for cyc in _cycles(mapping):
        L = len(cyc)
        for i in range(L):
            j = (-i) % L
            if i < j:
                first.append((cyc[i], cyc[j]))
            j = (1 - i) % L
            if i < j:
                second.append((cyc[i], cyc[j]))
    return first, second


def permutation_gates(mapping: dict[int, int], control: int, polarity: int, alloc) -> list[Gate]:
    """Gates applying ``mapping`` when wire ``control`` equals ``polarity``.

    ``alloc()`` must return a fresh |0> ancilla wire; copies are restored.
    """
    rounds = transposition_rounds(mapping)
    k = max(len(r) for r in rounds)
    if k == 0:
        return []
    copies = [alloc() for _ in range(k)]
    fan = [Gate.make("NOT", copies[0], {control: polarity})]
    have = 1
    while have < k:
        step = min(have, k - have)
        fan += [Gate.make("NOT", copies[have + i], {copies[i]: 1}) for i in range(step)]
        have += step
    body = []
    for rnd in rounds:
        body += [Gate.make("NOT", x, {y: 1}) for x, y in rnd]
        body += [Gate.make("NOT", y, {copies[i]: 1, x: 1}) for i, (x, y) in enumerate(rnd)]
        body += [Gate.make("NOT", x, {y: 1}) for x, y in rnd]
    return fan + body + fan[::-1]


def controlled_permutation(perm, control: tuple[int, int]) -> Circuit:
    """Circuit moving the content of wire ``i`` to ``perm[i]`` when the control matches.

    ``perm`` is a dict over ``1..n`` or a sequence whose ``i-1``-th entry is
    the image of wire ``i``.  ``control`` is ``(wire, polarity)`` with the
    wire outside ``1..n``; fan-out copies are ancillas after every input wire.
    """
    mapping = dict(perm) if isinstance(perm, dict) else {i + 1: int(v) for i, v in enumerate(perm)}
    n = len(mapping)
    if sorted(mapping) != list(range(1, n + 1)) or sorted(mapping.values()) != list(range(1, n + 1)):
        raise CircuitError("perm must be a bijection on 1..n")
    cw, pol = control
    if 1 <= cw <= n:
        raise CircuitError("control wire must lie outside the permuted wires")
    inputs = max(n, cw)
    next_wire = [inputs]

    def alloc() -> int:
        next_wire[0] += 1
        return next_wire[0]

    gates = permutation_gates(mapping, cw, pol, alloc)
    return Circuit(inputs, next_wire[0] - inputs, gates)
