"""Call graph, width, rank and the WF / WIDTH<=1 / BASIC / PBP classification."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import cached_property

import networkx as nx

from pbpc.frontend import ast as A
from pbpc.frontend.printer import show_set


@dataclass
class CallGraph:
    names: tuple[str, ...]
    edges: frozenset  # (caller, callee) pairs

    @cached_property
    def _graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.names)
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def reach(self) -> dict[str, frozenset]:
        """Procedures reachable in one or more call steps (the order proc >= proc')."""
        g = self._graph
        out = {}
        for v in self.names:
            r = set()
            for u in g.successors(v):
                r.add(u)
                r |= nx.descendants(g, u)
            out[v] = frozenset(r)
        return out

    def geq(self, a: str, b: str) -> bool:
        return b in self.reach[a]

    def sim(self, a: str, b: str) -> bool:
        return self.geq(a, b) and self.geq(b, a)

    def strictly_above(self, a: str, b: str) -> bool:
        return self.geq(a, b) and not self.sim(a, b)

    def recursive(self, a: str) -> bool:
        return self.sim(a, a)

    @cached_property
    def families(self) -> list[tuple[str, ...]]:
        """Equivalence classes of mutually recursive procedures, by declaration order."""
        seen: set[str] = set()
        out = []
        for v in self.names:
            if v in seen or not self.recursive(v):
                continue
            fam = tuple(u for u in self.names if self.sim(v, u))
            seen.update(fam)
            out.append(fam)
        return out

    def family_of(self, name: str) -> tuple[str, ...] | None:
        for fam in self.families:
            if name in fam:
                return fam
        return None


def build_call_graph(p: A.Program) -> CallGraph:
    edges = {(d.name, c.proc) for d in p.decls for c in A.calls_in(d.body)}
    return CallGraph(p.names, frozenset(edges))


class Analysis:
    """Cached per-program static facts used by the compiler."""

    def __init__(self, p: A.Program):
        self.program = p
        self.graph = build_call_graph(p)
        self.bodies = {d.name: d.body for d in p.decls}
        self._w: dict = {}
        self._rank: dict = {}

    def w(self, proc: str, s: A.Statement) -> int:
        key = (proc, id(s))
        if key in self._w:
            return self._w[key][0]
        if isinstance(s, (A.Skip, A.Unitary)):
            v = 0
        elif isinstance(s, A.Seq):
            v = self.w(proc, s.first) + self.w(proc, s.second)
        elif isinstance(s, A.If):
            v = max(self.w(proc, s.then), self.w(proc, s.orelse))
        elif isinstance(s, A.QCase):
            v = max(self.w(proc, s.branch0), self.w(proc, s.branch1))
        elif isinstance(s, A.Call):
            v = 1 if self.graph.sim(proc, s.proc) else 0
        else:
            raise TypeError(s)
        self._w[key] = (v, s)  # keep s alive so its id stays unique
        return v

    def width(self, proc: str) -> int:
        return self.w(proc, self.bodies[proc])

    def rank(self, proc: str) -> int:
        if proc in self._rank:
            return self._rank[proc]
        g = self.graph
        below = g.reach[proc]
        if not below:
            r = 0
        elif not g.recursive(proc):
            r = max(self.rank(q) for q in below)
        else:
            r = 1 + max((self.rank(q) for q in below if not g.sim(proc, q)), default=0)
        self._rank[proc] = r
        return r

    def calls_recursive(self, s: A.Statement) -> str | None:
        """Family representative of the recursive procedure ``s`` calls, if any."""
        for fam in self.graph.families:
            if self.w(fam[0], s) >= 1:
                return fam[0]
        return None


@dataclass
class ProcInfo:
    width: int
    rank: int
    recursive: bool


@dataclass
class ClassificationReport:
    procs: dict[str, ProcInfo]
    wf: bool
    width_le_1: bool
    basic: bool
    basic_arg: str | None
    pbp: bool
    families: list[list[str]] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def label(self) -> str:
        if self.pbp:
            return "PBP"
        if self.wf and self.width_le_1:
            return "WF+WIDTH<=1"
        return "unsupported"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["label"] = self.label
        return d


def width(p: A.Program, proc: str) -> int:
    return Analysis(p).width(proc)


def rank(p: A.Program, proc: str) -> int:
    return Analysis(p).rank(proc)


def _has_removal(s: A.SetExpr) -> bool:
    return isinstance(s, (A.Remove, A.RemoveMany))


def classify_program(p: A.Program, analysis: Analysis | None = None) -> ClassificationReport:
    an = analysis or Analysis(p)
    g = an.graph
    diags: list[str] = []

    wf = True
    for d in p.decls:
        for c in A.calls_in(d.body):
            if g.sim(d.name, c.proc) and not _has_removal(c.arg):
                wf = False
                diags.append(f"WF: recursive call {d.name} -> {c.proc}({show_set(c.arg)}) removes no qubit")

    procs = {}
    for name in p.names:
        procs[name] = ProcInfo(an.width(name), an.rank(name), g.recursive(name))
        if procs[name].width > 1:
            diags.append(f"WIDTH: {name} has width {procs[name].width}")
    width_ok = all(info.width <= 1 for info in procs.values())

    args = []
    for body in [d.body for d in p.decls] + [p.body]:
        for c in A.calls_in(body):
            if not isinstance(c.arg, A.SetVar) and c.arg not in args:
                args.append(c.arg)
    basic = len(args) <= 1
    if not basic:
        diags.append("BASIC: distinct call arguments " + "; ".join(show_set(a) for a in args))
    basic_arg = show_set(args[0]) if len(args) == 1 else None

    return ClassificationReport(
        procs=procs,
        wf=wf,
        width_le_1=width_ok,
        basic=basic,
        basic_arg=basic_arg,
        pbp=wf and width_ok and basic,
        families=[list(f) for f in g.families],
        diagnostics=diags,
    )
