"""Orthogonality of control structures, seeing through ancilla controls.

Input wires are boolean variables.  An anchoring ancilla holds the XOR of
the control structures flipped into it, kept as a BDD, so a control ``a:1``
is replaced by that function.  Two structures are orthogonal when their
conjunction is unsatisfiable.
"""

from __future__ import annotations

from dd.autoref import BDD


class OrthogonalityError(AssertionError):
    pass


def syntactic_conflict(c1: dict, c2: dict) -> bool:
    if len(c2) < len(c1):
        c1, c2 = c2, c1
    for w, b in c1.items():
        v = c2.get(w)
        if v is not None and v != b:
            return True
    return False


class OrthogonalityChecker:
    def __init__(self, n_inputs: int, enabled: bool = True):
        self.n = n_inputs
        self.enabled = enabled
        self.defs: dict[int, list[dict]] = {}  # ancilla -> control structures flipped into it
        self.checks = 0
        self._bdd = BDD()
        self._fn: dict = {}
        self._implied: dict[int, dict] = {}  # ancilla -> input literals common to all its definitions

    def _var(self, w: int):
        name = f"x{w}"
        if name not in self._bdd.vars:
            self._bdd.declare(name)
        return self._bdd.var(name)

    def _lit(self, w: int, b: int):
        if w > self.n:
            f = self._fn.get(w, self._bdd.false)
        else:
            f = self._var(w)
        return f if b else ~f

    def function(self, cs: dict):
        f = self._bdd.true
        for w, b in sorted(cs.items()):
            f &= self._lit(w, b)
        return f

    def implied(self, cs: dict) -> dict:
        """``cs`` plus the input literals forced by its ancilla controls."""
        out = dict(cs)
        for w, b in cs.items():
            if w > self.n and b == 1:
                for v, c in self._implied.get(w, {}).items():
                    if out.setdefault(v, c) != c:
                        return {**out, v: None}  # unsatisfiable on its own
        return out

    def flip(self, a: int, cs: dict) -> None:
        """Record a NOT on ancilla ``a`` controlled by ``cs``."""
        self.defs.setdefault(a, []).append(cs)
        if self.enabled:
            lits = {w: b for w, b in self.implied(cs).items() if w <= self.n}
            if a in self._implied:
                lits = {w: b for w, b in self._implied[a].items() if lits.get(w) == b}
            self._implied[a] = lits
            self._fn[a] = self._bdd.apply("xor", self._fn.get(a, self._bdd.false), self.function(cs))

    def orthogonal(self, c1: dict, c2: dict) -> bool:
        if syntactic_conflict(c1, c2):
            return True
        return (self.function(c1) & self.function(c2)) == self._bdd.false

    def require(self, new: dict, live, where: str = "") -> None:
        """Assert ``new`` is orthogonal to every control structure in ``live``."""
        if not self.enabled:
            return
        f = None
        ext = self.implied(new)
        for other in live:
            self.checks += 1
            if syntactic_conflict(new, other) or syntactic_conflict(ext, self.implied(other)):
                continue
            if f is None:
                f = self.function(new)
            if (f & self.function(other)) != self._bdd.false:
                raise OrthogonalityError(
                    f"controls {sorted(new.items())} and {sorted(other.items())} overlap{where}"
                )
