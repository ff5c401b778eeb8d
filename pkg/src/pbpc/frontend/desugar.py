"""Expansion of surface sugar into the core statement language.

After :func:`desugar` a program contains only ``Skip``, ``Unitary``, ``Seq``
(right-nested), ``If``, single-control ``QCase`` and ``Call``; sorted sets use
single-index ``Remove`` only and no index is a negative literal.
"""

from __future__ import annotations

from pbpc.frontend import ast as A


class DesugarError(Exception):
    pass


def _neg(base: A.SetExpr, k: int) -> A.IntExpr:
    # s[-k]  ==  s[|s| - k + 1]
    return A.IntBin(A.IntBin(A.Size(base), "-", k), "+", 1)


def _int(e: A.IntExpr) -> A.IntExpr:
    if isinstance(e, A.IntBin):
        return A.IntBin(_int(e.left), e.op, e.right, e.pos)
    if isinstance(e, A.Size):
        return A.Size(_set(e.set), e.pos)
    return e


def _index(base: A.SetExpr, e: A.IntExpr) -> A.IntExpr:
    if isinstance(e, A.IntLit) and e.value < 0:
        return _neg(base, -e.value)
    return _int(e)


def _set(s: A.SetExpr) -> A.SetExpr:
    if isinstance(s, A.SetVar):
        return s
    if isinstance(s, A.Remove):
        base = _set(s.base)
        return A.Remove(base, _index(base, s.index), s.pos)
    if isinstance(s, A.RemoveMany):
        base = _set(s.base)
        negs, poss = [], []
        for e in s.indices:
            if isinstance(e, A.IntLit) and e.value < 0:
                negs.append(-e.value)
            elif isinstance(e, A.IntLit):
                poss.append(e.value)
            else:
                raise DesugarError("multi-index removal needs literal indices")
        if len(set(negs)) != len(negs) or len(set(poss)) != len(poss):
            raise DesugarError("repeated index in multi-index removal")
        # tail positions first (each removal shifts the later magnitudes by one),
        # then head positions from highest to lowest so earlier ones stay put
        out = base
        for done, k in enumerate(sorted(negs)):
            out = A.Remove(out, _neg(out, k - done), s.pos)
        for k in sorted(poss, reverse=True):
            out = A.Remove(out, A.IntLit(k), s.pos)
        return out
    raise TypeError(f"not a sorted set: {s!r}")


def _qubit(q: A.Qubit) -> A.Qubit:
    base = _set(q.base)
    return A.Qubit(base, _index(base, q.index), q.pos)


def _bool(b: A.BoolExpr) -> A.BoolExpr:
    if isinstance(b, A.Compare):
        return A.Compare(b.op, _int(b.left), _int(b.right), b.pos)
    if isinstance(b, A.BoolAnd):
        return A.BoolAnd(_bool(b.left), _bool(b.right), b.pos)
    if isinstance(b, A.BoolOr):
        return A.BoolOr(_bool(b.left), _bool(b.right), b.pos)
    if isinstance(b, A.BoolNot):
        return A.BoolNot(_bool(b.arg), b.pos)
    raise TypeError(f"not a boolean: {b!r}")


def _cnot(c: A.Qubit, t: A.Qubit, pos) -> A.Statement:
    return A.QCase(c, A.Skip(pos), A.Unitary(t, "NOT", pos=pos), pos)


def _macro(m: A.Macro) -> A.Statement:
    qs = [_qubit(q) for q in m.qubits]
    if m.name == "CNOT":
        return _cnot(qs[0], qs[1], m.pos)
    if m.name == "SWAP":
        a, b = qs
        return A.seq_of([_cnot(a, b, m.pos), _cnot(b, a, m.pos), _cnot(a, b, m.pos)])
    if m.name == "TOF":
        return A.QCase(qs[0], A.Skip(m.pos), _cnot(qs[1], qs[2], m.pos), m.pos)
    if m.name == "CPHASE":
        # controlled R_i, where R_i = PH(pi / 2^(i-1))
        ph = A.Unitary(qs[1], "PH", A.PhaseDyadic(1, -1), _int(m.arg), m.pos)
        return A.QCase(qs[0], A.Skip(m.pos), ph, m.pos)
    raise DesugarError(f"unknown macro {m.name}")


def _stmt(s: A.Statement) -> A.Statement:
    if isinstance(s, A.Skip):
        return s
    if isinstance(s, A.Unitary):
        arg = None if s.arg is None else _int(s.arg)
        return A.Unitary(_qubit(s.target), s.gate, s.phase, arg, s.pos)
    if isinstance(s, A.Seq):
        parts = A.flatten_seq(_stmt(s.first)) + A.flatten_seq(_stmt(s.second))
        return A.seq_of(parts)
    if isinstance(s, A.If):
        return A.If(_bool(s.cond), _stmt(s.then), _stmt(s.orelse), s.pos)
    if isinstance(s, A.QCase):
        return A.QCase(_qubit(s.control), _stmt(s.branch0), _stmt(s.branch1), s.pos)
    if isinstance(s, A.QCaseMulti):
        k = len(s.controls)
        table = dict(s.branches)
        missing = [format(i, f"0{k}b") for i in range(2**k) if format(i, f"0{k}b") not in table]
        if missing:
            where = f" (line {s.pos[0]})" if s.pos else ""
            raise DesugarError(f"qcase is missing branch label(s) {', '.join(missing)}{where}")
        controls = [_qubit(q) for q in s.controls]

        def build(prefix: str) -> A.Statement:
            if len(prefix) == k:
                return _stmt(table[prefix])
            return A.QCase(controls[len(prefix)], build(prefix + "0"), build(prefix + "1"), s.pos)

        return build("")
    if isinstance(s, A.Call):
        return A.Call(s.proc, _set(s.arg), s.pos)
    if isinstance(s, A.Macro):
        return _macro(s)
    raise TypeError(f"not a statement: {s!r}")


def desugar(p: A.Program) -> A.Program:
    decls = tuple(A.Decl(d.name, _stmt(d.body), d.pos) for d in p.decls)
    return A.Program(decls, _stmt(p.body))
