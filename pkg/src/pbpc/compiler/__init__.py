from pbpc.compiler.baseline import BudgetExceeded, SizeCount, compile_baseline
from pbpc.compiler.core import (
    STRATEGIES,
    CompileError,
    CompileOutput,
    ControlledStatement,
    compile_program,
    compile_swap,
    procedure_split,
    seq_decompose,
)
from pbpc.compiler.orthogonality import OrthogonalityChecker, OrthogonalityError

compile = compile_program  # noqa: A001

__all__ = [
    "STRATEGIES",
    "BudgetExceeded",
    "CompileError",
    "CompileOutput",
    "ControlledStatement",
    "OrthogonalityChecker",
    "OrthogonalityError",
    "SizeCount",
    "compile",
    "compile_baseline",
    "compile_program",
    "compile_swap",
    "procedure_split",
    "seq_decompose",
]
