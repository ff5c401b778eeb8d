from pbpc.frontend import ast
from pbpc.frontend.desugar import DesugarError, desugar
from pbpc.frontend.parser import ParseError, parse_program
from pbpc.frontend.printer import pretty_print


def load_program(source: str) -> "ast.Program":
    """Parse and desugar in one step."""
    return desugar(parse_program(source))


__all__ = ["ast", "desugar", "DesugarError", "parse_program", "ParseError", "pretty_print", "load_program"]
