from __future__ import annotations

from pbpc.frontend import ast as A

INDENT = "  "


def show_int(e: A.IntExpr) -> str:
    if isinstance(e, A.IntLit):
        return str(e.value)
    if isinstance(e, A.IntVar):
        return e.name
    if isinstance(e, A.IntBin):
        op, n = e.op, e.right
        if n < 0:
            op, n = ("-" if op == "+" else "+"), -n
        return f"{show_int(e.left)} {op} {n}"
    if isinstance(e, A.Size):
        return f"|{show_set(e.set)}|"
    raise TypeError(e)


def show_set(s: A.SetExpr) -> str:
    if isinstance(s, A.SetVar):
        return "qs"
    if isinstance(s, A.Remove):
        return f"{show_set(s.base)} - [{show_int(s.index)}]"
    if isinstance(s, A.RemoveMany):
        return f"{show_set(s.base)} - [{', '.join(show_int(i) for i in s.indices)}]"
    raise TypeError(s)


def show_qubit(q: A.Qubit) -> str:
    base = show_set(q.base)
    if not isinstance(q.base, A.SetVar):
        base = f"({base})"
    return f"{base}[{show_int(q.index)}]"


def show_bool(b: A.BoolExpr) -> str:
    if isinstance(b, A.Compare):
        return f"{show_int(b.left)} {b.op} {show_int(b.right)}"
    if isinstance(b, A.BoolAnd):
        return f"({show_bool(b.left)} and {show_bool(b.right)})"
    if isinstance(b, A.BoolOr):
        return f"({show_bool(b.left)} or {show_bool(b.right)})"
    if isinstance(b, A.BoolNot):
        return f"not ({show_bool(b.arg)})"
    raise TypeError(b)


def show_phase(f: A.PhaseFn) -> str:
    if isinstance(f, A.PhaseConst):
        return f"{f.a}*pi" if f.b == 1 else f"{f.a}*pi/{f.b}"
    if f.c == 0:
        return f"{f.a}*pi/2^x"
    sign = "+" if f.c > 0 else "-"
    return f"{f.a}*pi/2^(x{sign}{abs(f.c)})"


def _lines(s: A.Statement, depth: int) -> list[str]:
    pad = INDENT * depth
    out: list[str] = []
    for st in A.flatten_seq(s):
        if isinstance(st, A.Skip):
            out.append(pad + "skip;")
        elif isinstance(st, A.Unitary):
            txt = f"{show_qubit(st.target)} *= {st.gate}"
            if st.phase is not None:
                txt += "^{" + show_phase(st.phase) + "}"
            if st.arg is not None:
                txt += f"({show_int(st.arg)})"
            out.append(pad + txt + ";")
        elif isinstance(st, A.If):
            out.append(pad + f"if {show_bool(st.cond)} then {{")
            out += _lines(st.then, depth + 1)
            out.append(pad + "} else {")
            out += _lines(st.orelse, depth + 1)
            out.append(pad + "}")
        elif isinstance(st, A.QCase):
            out.append(pad + f"qcase {show_qubit(st.control)} of {{")
            for lab, body in (("0", st.branch0), ("1", st.branch1)):
                out.append(pad + INDENT + f"{lab} ->")
                out += _lines(body, depth + 2)
            out.append(pad + "}")
        elif isinstance(st, A.QCaseMulti):
            ctl = ", ".join(show_qubit(q) for q in st.controls)
            out.append(pad + f"qcase {ctl} of {{")
            for lab, body in st.branches:
                out.append(pad + INDENT + f"{lab} ->")
                out += _lines(body, depth + 2)
            out.append(pad + "}")
        elif isinstance(st, A.Call):
            out.append(pad + f"call {st.proc}({show_set(st.arg)});")
        elif isinstance(st, A.Macro):
            args = [show_qubit(q) for q in st.qubits]
            if st.arg is not None:
                args.append(show_int(st.arg))
            out.append(pad + f"{st.name}({', '.join(args)});")
        else:
            raise TypeError(st)
    return out


def pretty_statement(s: A.Statement, depth: int = 0) -> str:
    return "\n".join(_lines(s, depth))


def pretty_print(p: A.Program) -> str:
    """Render ``p`` in surface syntax; the output re-parses to an equal AST."""
    chunks = []
    for d in p.decls:
        chunks.append(f"decl {d.name}(qs) {{\n{pretty_statement(d.body, 1)}\n}}")
    head = ",\n".join(chunks)
    body = pretty_statement(p.body, 1)
    return (head + "\n" if head else "") + "::\n" + body + "\n"
