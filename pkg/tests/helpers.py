from functools import lru_cache

import numpy as np
from hypothesis import strategies as st

from pbpc.circuit import gate_unitary
from pbpc.frontend import ast as A
from pbpc.harness.corpus import builtin_example

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}

CORPUS = ["pairs", "qft", "rec", "add", "skew", "width2", "chained(1)", "chained(2)", "sum(1)", "sum(3)"]


@lru_cache(maxsize=None)
def prog(ident):
    return builtin_example(ident)


QS = A.SetVar()


def _lit(k):
    return A.IntLit(k)


def qubit(k):
    return A.Qubit(QS, _lit(k))


# desugared statements over `qs`; calls go to the single procedure "p"
_leaf = st.one_of(
    st.just(A.Skip()),
    st.builds(lambda k, g: A.Unitary(qubit(k), g), st.integers(1, 4), st.sampled_from(["NOT", "H"])),
    st.builds(
        lambda k, a, c: A.Unitary(qubit(k), "PH", A.PhaseDyadic(a, c), _lit(k)),
        st.integers(1, 4),
        st.integers(1, 3),
        st.integers(-1, 2),
    ),
    st.builds(lambda k, a, b: A.Unitary(qubit(k), "RY", A.PhaseConst(a, b)), st.integers(1, 4), st.integers(1, 5), st.integers(1, 4)),
    st.builds(lambda k: A.Call("p", A.Remove(QS, _lit(k))), st.integers(1, 3)),
)

_cond = st.builds(
    lambda op, k: A.Compare(op, A.Size(QS), _lit(k)), st.sampled_from(["<", ">", ">=", "<=", "="]), st.integers(0, 5)
)


def _compound(inner):
    return st.one_of(
        st.lists(inner, min_size=2, max_size=3).map(A.seq_of),
        st.builds(A.If, _cond, inner, inner),
        st.builds(lambda k, a, b: A.QCase(qubit(k), a, b), st.integers(1, 4), inner, inner),
    )


statements = st.recursive(_leaf, _compound, max_leaves=12)
programs = st.builds(
    lambda body, main: A.Program((A.Decl("p", body),), main),
    statements,
    st.sampled_from([A.Call("p", QS), A.Skip()]),
)


def oracle_matrix(c):
    """Column-by-column construction from basis-index bit tests."""
    n = c.total_wires
    u = np.eye(2**n, dtype=complex)
    for g in c.gates:
        step = np.zeros((2**n, 2**n), dtype=complex)
        mat = gate_unitary(g)
        tbit = n - g.target
        for x in range(2**n):
            bits = lambda w: (x >> (n - w)) & 1  # noqa: E731
            if all(bits(w) == p for w, p in g.controls):
                b = (x >> tbit) & 1
                x0 = x & ~(1 << tbit)
                step[x0, x] += mat[0, b]
                step[x0 | (1 << tbit), x] += mat[1, b]
            else:
                step[x, x] = 1
        u = step @ u
    return u
