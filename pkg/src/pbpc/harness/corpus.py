"""Built-in example programs, including the generated chained(k) and sum(r) families."""

from __future__ import annotations

import importlib.resources
import re

from pbpc.frontend import ast as A
from pbpc.frontend import load_program

SHIPPED = ("pairs", "qft", "rec", "add", "skew", "width2")
_WORDS = ("zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten")
_FLIP = "decl flip(qs) {\n  qs[-1] *= NOT;\n}"


class UnknownExample(KeyError):
    pass


def shipped_source(name: str) -> str:
    return (importlib.resources.files("pbpc") / "programs" / f"{name}.pbp").read_text()


def _step(name: str, on0: str, on1: str) -> str:
    return (
        f"decl {name}(qs) {{\n"
        f"  qcase qs[1] of {{\n"
        f"    0 -> call {on0}(qs - [1]);\n"
        f"    1 -> call {on1}(qs - [1]);\n"
        f"  }}\n}}"
    )


def chained_source(k: int) -> str:
    """k copies of the a/b/c/d substring automaton, d_i feeding a_{i+1}."""
    if k < 1:
        raise ValueError("chained(k) needs k >= 1")
    decls = []
    for i in range(1, k + 1):
        nxt = f"a_{i + 1}" if i < k else "flip"
        decls += [
            _step(f"a_{i}", f"b_{i}", f"a_{i}"),
            _step(f"b_{i}", f"c_{i}", f"b_{i}"),
            _step(f"c_{i}", f"c_{i}", f"d_{i}"),
            _step(f"d_{i}", f"d_{i}", nxt),
        ]
    decls.append(_FLIP)
    return ",\n".join(decls) + "\n:: call a_1(qs);\n"


def _counter(i: int) -> str:
    return _WORDS[i] if i < len(_WORDS) else f"count_{i}"


def sum_source(r: int) -> str:
    """Counters 0..r over the input bits; the last one flips the output on an exact hit."""
    if r < 1:
        raise ValueError("sum(r) needs r >= 1")
    decls = [_step(_counter(i), _counter(i), _counter(i + 1)) for i in range(r)]
    last = _counter(r)
    decls.append(
        f"decl {last}(qs) {{\n"
        f"  if |qs| = 1 then call flip(qs);\n"
        f"  else qcase qs[1] of {{\n"
        f"    0 -> call {last}(qs - [1]);\n"
        f"    1 -> skip;\n"
        f"  }}\n}}"
    )
    decls.append(_FLIP)
    return ",\n".join(decls) + f"\n:: call {_counter(0)}(qs);\n"


_PARAM = re.compile(r"^(chained|sum)\s*[(_:]?\s*(\d+)\s*\)?$")


def example_source(ident: str) -> str:
    key = ident.strip().lower()
    if key in SHIPPED:
        return shipped_source(key)
    m = _PARAM.match(key)
    if m:
        k = int(m.group(2))
        return chained_source(k) if m.group(1) == "chained" else sum_source(k)
    raise UnknownExample(ident)


def builtin_example(ident: str) -> A.Program:
    """Desugared program for ``pairs``, ``qft``, ``rec``, ``add``, ``skew``,
    ``width2``, ``chained(k)`` or ``sum(r)``."""
    return load_program(example_source(ident))


def builtin_ids() -> list[str]:
    return list(SHIPPED) + ["chained(k)", "sum(r)"]
