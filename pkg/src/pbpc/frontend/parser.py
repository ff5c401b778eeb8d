"""Lexer and recursive-descent parser for ``.pbp`` sources.

Surface grammar (ASCII rendering of the paper's syntax)::

    program  ::= (decl ","?)* "::" stmts
    decl     ::= "decl" NAME "(" NAME ")" "{" stmts "}"
    stmt     ::= "skip" ";"
               | qubit "*=" GATE ("^{" phase "}")? ("(" int ")")? ";"
               | "if" bool "then" block "else" block
               | "qcase" qubit ("," qubit)* "of" "{" (BITS "->" stmts ","?)+ "}"
               | "call" NAME "(" set ")" ";"
               | MACRO "(" args ")" ";"
               | "{" stmts "}"
    set      ::= NAME ("-" "[" int ("," int)* "]")*  |  "(" set ")"
    qubit    ::= set "[" int ("," int)* "]"
    int      ::= atom (("+" | "-") NUMBER)*
    atom     ::= NUMBER | "-" NUMBER | "|" set "|" | "(" int ")"
    phase    ::= (INT "*")? "pi" ("/" NUMBER | "/" "2^" ("(" "x" (("+"|"-") NUMBER)? ")" | "x"))?

Line comments start with ``//``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from pbpc.frontend import ast as A


class ParseError(Exception):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{msg}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|//[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|\*=|::|>=|<=|!=|==|&&|[{}()\[\];,|+\-*/^=<>!])
    """,
    re.VERBOSE,
)

KEYWORDS = {"decl", "skip", "if", "then", "else", "qcase", "of", "call", "and", "or", "not"}


def tokenize(src: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "name" and text in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, text, line, pos - line_start + 1))
        for i, ch in enumerate(text):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0
        self.param = "qs"

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            self.fail(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def fail(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        raise ParseError(msg, t.line, t.col)

    def here(self) -> A.Pos:
        return (self.tok.line, self.tok.col)

    # -- program ------------------------------------------------------------

    def program(self) -> A.Program:
        decls = []
        while self.at("decl"):
            decls.append(self.decl())
            self.accept(",")
        self.expect("::")
        self.param = "qs"
        body = self.stmts(stop=())
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r} after program body")
        return A.Program(tuple(decls), body)

    def decl(self) -> A.Decl:
        pos = self.here()
        self.expect("decl")
        name = self.expect_kind("name", "procedure name").text
        self.expect("(")
        self.param = self.expect_kind("name", "parameter name").text
        self.expect(")")
        self.expect("{")
        body = self.stmts(stop=("}",))
        self.expect("}")
        return A.Decl(name, body, pos)

    # -- statements ---------------------------------------------------------

    def _at_stop(self, stop: tuple[str, ...]) -> bool:
        t = self.tok
        if t.kind == "eof":
            return True
        if t.kind in ("op", "kw") and t.text in stop:
            return True
        # a branch label "01 ->" ends the current branch body
        return t.kind == "num" and self.peek().text == "->"

    def stmts(self, stop: tuple[str, ...]) -> A.Statement:
        items: list[A.Statement] = []
        while not self._at_stop(stop):
            items.append(self.stmt())
        flat = [s for item in items for s in A.flatten_seq(item)]
        return A.seq_of(flat)

    def block(self, stop: tuple[str, ...]) -> A.Statement:
        if self.at("{"):
            self.advance()
            body = self.stmts(stop=("}",))
            self.expect("}")
            return body
        return self.stmts(stop=stop)

    def stmt(self) -> A.Statement:
        t = self.tok
        pos = (t.line, t.col)
        if self.accept("skip"):
            self.expect(";")
            return A.Skip(pos)
        if self.accept("if"):
            cond = self.bool_expr()
            self.expect("then")
            then = self.block(stop=("else",))
            self.expect("else")
            orelse = self.block(stop=("}", "else"))
            return A.If(cond, then, orelse, pos)
        if self.accept("qcase"):
            return self.qcase(pos)
        if self.accept("call"):
            name = self.expect_kind("name", "procedure name").text
            self.expect("(")
            arg = self.set_expr()
            self.expect(")")
            self.expect(";")
            return A.Call(name, arg, pos)
        if self.at("{"):
            self.advance()
            body = self.stmts(stop=("}",))
            self.expect("}")
            return body
        if t.kind == "name" and t.text in A.MACROS and self.peek().text == "(":
            return self.macro(pos)
        if t.kind == "name" or self.at("("):
            return self.unitary(pos)
        self.fail(f"unexpected {t.text or 'end of input'!r} at start of statement")

    def qcase(self, pos) -> A.Statement:
        controls: list[A.Qubit] = list(self.qubits())
        while self.accept(","):
            controls.extend(self.qubits())
        self.expect("of")
        self.expect("{")
        branches: list[tuple[str, A.Statement]] = []
        seen = set()
        while not self.at("}"):
            lab = self.expect_kind("num", "branch label")
            if len(lab.text) != len(controls) or set(lab.text) - {"0", "1"}:
                self.fail(f"branch label {lab.text!r} is not a {len(controls)}-bit string", lab)
            if lab.text in seen:
                self.fail(f"duplicate branch label {lab.text!r}", lab)
            seen.add(lab.text)
            self.expect("->")
            body = self.stmts(stop=("}", ","))
            self.accept(",")
            branches.append((lab.text, body))
        self.expect("}")
        self.accept(";")
        if len(controls) == 1 and seen == {"0", "1"}:
            b = dict(branches)
            return A.QCase(controls[0], b["0"], b["1"], pos)
        return A.QCaseMulti(tuple(controls), tuple(branches), pos)

    def macro(self, pos) -> A.Statement:
        name = self.advance().text
        self.expect("(")
        nq = A.MACROS[name]
        qubits = [self.qubit()]
        for _ in range(nq - 1):
            self.expect(",")
            qubits.append(self.qubit())
        arg = None
        if name == "CPHASE":
            self.expect(",")
            arg = self.int_expr()
        self.expect(")")
        self.expect(";")
        return A.Macro(name, tuple(qubits), arg, pos)

    def unitary(self, pos) -> A.Statement:
        target = self.qubit()
        self.expect("*=")
        gtok = self.expect_kind("name", "gate name")
        if gtok.text not in A.GATES:
            self.fail(f"unknown gate {gtok.text!r}", gtok)
        phase = None
        if self.accept("^"):
            self.expect("{")
            phase = self.phase()
            self.expect("}")
        arg = None
        if self.accept("("):
            arg = self.int_expr()
            self.expect(")")
        self.expect(";")
        if gtok.text in ("RY", "PH") and phase is None:
            self.fail(f"gate {gtok.text} needs an angle, e.g. {gtok.text}^{{1*pi/4}}", gtok)
        if gtok.text in ("NOT", "H") and phase is not None:
            self.fail(f"gate {gtok.text} takes no angle", gtok)
        if isinstance(phase, A.PhaseDyadic) and arg is None:
            self.fail("an angle depending on x needs an integer argument", gtok)
        return A.Unitary(target, gtok.text, phase, arg, pos)

    def phase(self) -> A.PhaseFn:
        a = 1
        neg = self.accept("-")
        if self.tok.kind == "num":
            a = int(self.advance().text)
            self.expect("*")
        if neg:
            a = -a
        pi = self.expect_kind("name", "'pi'")
        if pi.text != "pi":
            self.fail("expected 'pi'", pi)
        if not self.accept("/"):
            return A.PhaseConst(a, 1)
        den = self.expect_kind("num", "denominator")
        if not self.at("^"):
            if int(den.text) == 0:
                self.fail("zero denominator", den)
            return A.PhaseConst(a, int(den.text))
        if den.text != "2":
            self.fail("only powers of 2 may depend on x", den)
        self.advance()
        paren = self.accept("(")
        x = self.expect_kind("name", "'x'")
        if x.text != "x":
            self.fail("expected 'x'", x)
        c = 0
        if paren:
            if self.at("+") or self.at("-"):
                sign = 1 if self.advance().text == "+" else -1
                c = sign * int(self.expect_kind("num", "integer").text)
            self.expect(")")
        return A.PhaseDyadic(a, c)

    # -- expressions --------------------------------------------------------

    def set_expr(self) -> A.SetExpr:
        pos = self.here()
        if self.accept("("):
            base = self.set_expr()
            self.expect(")")
        else:
            name = self.expect_kind("name", "sorted set")
            if name.text != self.param:
                self.fail(f"unknown sorted set {name.text!r} (the parameter is {self.param!r})", name)
            base = A.SetVar(pos)
        while self.at("-") and self.peek().text == "[":
            p = self.here()
            self.advance()
            self.advance()
            idx = [self.int_expr()]
            while self.accept(","):
                idx.append(self.int_expr())
            self.expect("]")
            base = A.Remove(base, idx[0], p) if len(idx) == 1 else A.RemoveMany(base, tuple(idx), p)
        return base

    def qubits(self) -> list[A.Qubit]:
        pos = self.here()
        base = self.set_expr()
        self.expect("[")
        idx = [self.int_expr()]
        while self.accept(","):
            idx.append(self.int_expr())
        self.expect("]")
        return [A.Qubit(base, i, pos) for i in idx]

    def qubit(self) -> A.Qubit:
        t = self.tok
        qs = self.qubits()
        if len(qs) != 1:
            self.fail("multi-index qubit access is only allowed as qcase control", t)
        return qs[0]

    def int_expr(self) -> A.IntExpr:
        pos = self.here()
        left = self.int_atom()
        while (self.at("+") or self.at("-")) and self.peek().text != "[":
            op = self.advance().text
            n = self.expect_kind("num", "integer literal (only 'i + n' / 'i - n' are allowed)")
            left = A.IntBin(left, op, int(n.text), pos)
        return left

    def int_atom(self) -> A.IntExpr:
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "num":
            self.advance()
            return A.IntLit(int(t.text), pos)
        if self.accept("-"):
            n = self.expect_kind("num", "integer literal")
            return A.IntLit(-int(n.text), pos)
        if self.accept("|"):
            s = self.set_expr()
            self.expect("|")
            return A.Size(s, pos)
        if self.accept("("):
            e = self.int_expr()
            self.expect(")")
            return e
        if t.kind == "name":
            self.advance()
            if t.text == self.param:
                self.fail(f"sorted set {t.text!r} used as an integer (did you mean |{t.text}|?)", t)
            return A.IntVar(t.text, pos)
        self.fail(f"expected integer expression, found {t.text or 'end of input'!r}")

    def bool_expr(self) -> A.BoolExpr:
        left = self.bool_and()
        while self.accept("or"):
            left = A.BoolOr(left, self.bool_and())
        return left

    def bool_and(self) -> A.BoolExpr:
        left = self.bool_not()
        while self.accept("and") or self.accept("&&"):
            left = A.BoolAnd(left, self.bool_not())
        return left

    def bool_not(self) -> A.BoolExpr:
        pos = self.here()
        if self.accept("not") or self.accept("!"):
            return A.BoolNot(self.bool_not(), pos)
        if self.at("("):
            save = self.i
            try:
                self.advance()
                e = self.bool_expr()
                self.expect(")")
                return e
            except ParseError:
                self.i = save
        left = self.int_expr()
        op_tok = self.tok
        if op_tok.text not in A.COMPARISONS + ("==",) or op_tok.kind != "op":
            self.fail(f"expected comparison operator, found {op_tok.text!r}")
        self.advance()
        op = "=" if op_tok.text == "==" else op_tok.text
        return A.Compare(op, left, self.int_expr(), pos)


def _check(p: A.Program) -> None:
    names = set()
    for d in p.decls:
        if d.name in names:
            line, col = d.pos or (0, 0)
            raise ParseError(f"duplicate declaration of {d.name!r}", line, col)
        names.add(d.name)

    def walk(node) -> None:
        if isinstance(node, A.Call) and node.proc not in names:
            line, col = node.pos or (0, 0)
            raise ParseError(f"call to undeclared procedure {node.proc!r}", line, col)
        if isinstance(node, A.IntVar):
            line, col = node.pos or (0, 0)
            raise ParseError(f"unbound integer variable {node.name!r}", line, col)
        if isinstance(node, tuple):
            for x in node:
                walk(x)
            return
        if hasattr(node, "__dataclass_fields__"):
            for f in node.__dataclass_fields__:
                if f != "pos":
                    walk(getattr(node, f))

    for d in p.decls:
        walk(d.body)
    walk(p.body)


def parse_program(source: str) -> A.Program:
    """Parse surface syntax into a (not yet desugared) :class:`Program`.

    Raises :class:`ParseError` on grammar violations, duplicate declarations,
    calls to undeclared procedures and unbound integer variables.
    """
    prog = _Parser(source).program()
    _check(prog)
    return prog
