"""Abstract syntax of the qcase language.

Nodes are frozen dataclasses so programs can be hashed, compared and shared
between the interpreter and the compiler. Source positions are carried for
diagnostics but never take part in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

Pos = Optional[tuple[int, int]]


def _pos() -> Pos:
    return field(default=None, compare=False, repr=False)


# -- integers ---------------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class IntVar:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class IntBin:
    """``left + n`` or ``left - n``; the right operand is always a literal."""

    left: "IntExpr"
    op: str
    right: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Size:
    set: "SetExpr"
    pos: Pos = _pos()


IntExpr = Union[IntLit, IntVar, IntBin, Size]


# -- booleans ---------------------------------------------------------------

COMPARISONS = (">=", "<=", "=", "<", ">", "!=")


@dataclass(frozen=True)
class Compare:
    op: str
    left: IntExpr
    right: IntExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class BoolAnd:
    left: "BoolExpr"
    right: "BoolExpr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class BoolOr:
    left: "BoolExpr"
    right: "BoolExpr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class BoolNot:
    arg: "BoolExpr"
    pos: Pos = _pos()


BoolExpr = Union[Compare, BoolAnd, BoolOr, BoolNot]


# -- sorted sets and qubits -------------------------------------------------


@dataclass(frozen=True)
class SetVar:
    """The formal parameter of the enclosing procedure (``qs``)."""

    pos: Pos = _pos()


@dataclass(frozen=True)
class Remove:
    """``base - [index]``."""

    base: "SetExpr"
    index: IntExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class RemoveMany:
    """Surface-only ``base - [i, j, ...]``; indices refer to ``base``."""

    base: "SetExpr"
    indices: tuple[IntExpr, ...]
    pos: Pos = _pos()


SetExpr = Union[SetVar, Remove, RemoveMany]


@dataclass(frozen=True)
class Qubit:
    base: SetExpr
    index: IntExpr
    pos: Pos = _pos()


# -- phase functions --------------------------------------------------------


@dataclass(frozen=True)
class PhaseConst:
    """The constant angle ``a*pi/b``."""

    a: int
    b: int


@dataclass(frozen=True)
class PhaseDyadic:
    """The angle ``a*pi/2^(x+c)`` where ``x`` is the gate's integer argument."""

    a: int
    c: int


PhaseFn = Union[PhaseConst, PhaseDyadic]


# -- statements -------------------------------------------------------------

GATES = ("NOT", "H", "RY", "PH")
MACROS = {"CNOT": 2, "SWAP": 2, "TOF": 3, "CPHASE": 2}


@dataclass(frozen=True)
class Skip:
    pos: Pos = _pos()


@dataclass(frozen=True)
class Unitary:
    target: Qubit
    gate: str
    phase: Optional[PhaseFn] = None
    arg: Optional[IntExpr] = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class Seq:
    first: "Statement"
    second: "Statement"
    pos: Pos = _pos()


@dataclass(frozen=True)
class If:
    cond: BoolExpr
    then: "Statement"
    orelse: "Statement"
    pos: Pos = _pos()


@dataclass(frozen=True)
class QCase:
    control: Qubit
    branch0: "Statement"
    branch1: "Statement"
    pos: Pos = _pos()


@dataclass(frozen=True)
class QCaseMulti:
    """Surface-only multi-qubit qcase; ``branches`` maps bitstrings to bodies."""

    controls: tuple[Qubit, ...]
    branches: tuple[tuple[str, "Statement"], ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Call:
    proc: str
    arg: SetExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Macro:
    """Surface-only CNOT / SWAP / TOF / CPHASE application."""

    name: str
    qubits: tuple[Qubit, ...]
    arg: Optional[IntExpr] = None
    pos: Pos = _pos()


Statement = Union[Skip, Unitary, Seq, If, QCase, QCaseMulti, Call, Macro]


@dataclass(frozen=True)
class Decl:
    name: str
    body: Statement
    pos: Pos = _pos()


@dataclass(frozen=True)
class Program:
    decls: tuple[Decl, ...]
    body: Statement

    def proc(self, name: str) -> Decl:
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.decls)


def seq_of(stmts: list[Statement]) -> Statement:
    """Right-nested sequence of ``stmts`` (``skip`` when empty)."""
    if not stmts:
        return Skip()
    out = stmts[-1]
    for s in reversed(stmts[:-1]):
        out = Seq(s, out)
    return out


def flatten_seq(s: Statement) -> list[Statement]:
    if isinstance(s, Seq):
        return flatten_seq(s.first) + flatten_seq(s.second)
    return [s]


def calls_in(s: Statement) -> list[Call]:
    """Every call occurrence in ``s``, in syntactic order."""
    if isinstance(s, Call):
        return [s]
    if isinstance(s, Seq):
        return calls_in(s.first) + calls_in(s.second)
    if isinstance(s, If):
        return calls_in(s.then) + calls_in(s.orelse)
    if isinstance(s, QCase):
        return calls_in(s.branch0) + calls_in(s.branch1)
    if isinstance(s, QCaseMulti):
        return [c for _, b in s.branches for c in calls_in(b)]
    return []
