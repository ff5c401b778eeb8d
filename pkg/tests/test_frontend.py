import pytest
from hypothesis import given, settings

from helpers import CORPUS, programs, qubit
from pbpc.frontend import DesugarError, ParseError, ast as A, desugar, load_program, parse_program, pretty_print
from pbpc.harness.corpus import example_source


def _no_sugar(node):
    if isinstance(node, (A.QCaseMulti, A.Macro, A.RemoveMany)):
        return False
    if isinstance(node, tuple):
        return all(_no_sugar(x) for x in node)
    if hasattr(node, "__dataclass_fields__"):
        return all(_no_sugar(getattr(node, f)) for f in node.__dataclass_fields__ if f != "pos")
    return True


def test_pairs_surface_shape():
    p = parse_program(example_source("pairs"))
    assert p.names == ("pairs",)
    body = p.proc("pairs").body
    assert isinstance(body, A.If)
    assert isinstance(body.then, A.QCaseMulti)
    assert len(body.then.controls) == 2
    assert [lab for lab, _ in body.then.branches] == ["00", "01", "10", "11"]


def test_trivial_program():
    p = parse_program(":: skip;")
    assert p.decls == () and p.body == A.Skip()


@pytest.mark.parametrize("ident", CORPUS)
def test_corpus_roundtrip(ident):
    p = desugar(parse_program(example_source(ident)))
    assert parse_program(pretty_print(p)) == p


@pytest.mark.parametrize("ident", CORPUS)
def test_desugar_idempotent_and_complete(ident):
    p = desugar(parse_program(example_source(ident)))
    assert desugar(p) == p
    assert _no_sugar(p)


@given(programs)
@settings(max_examples=200, deadline=None)
def test_random_roundtrip(p):
    p = desugar(p)
    text = pretty_print(p)
    assert parse_program(text) == p
    assert pretty_print(p) == text
    assert desugar(p) == p


def test_pretty_trivial():
    assert " ".join(pretty_print(A.Program((), A.Skip())).split()) == ":: skip;"


def test_cnot_macro():
    got = load_program(":: CNOT(qs[1], qs[2]);").body
    assert got == A.QCase(qubit(1), A.Skip(), A.Unitary(qubit(2), "NOT"))


def test_multi_qcase_nests_on_first_control():
    p = load_program(example_source("pairs"))
    q = p.proc("pairs").body.then
    assert isinstance(q, A.QCase) and q.control == qubit(1)
    assert isinstance(q.branch0, A.QCase) and q.branch0.control == qubit(2)
    assert isinstance(q.branch1, A.QCase) and q.branch1.control == qubit(2)


def test_negative_index():
    got = load_program(":: qs[-1] *= NOT;").body.target
    size_minus = A.IntBin(A.IntBin(A.Size(A.SetVar()), "-", 1), "+", 1)
    assert got == A.Qubit(A.SetVar(), size_minus)


def test_multi_removal_uses_original_positions():
    # qs - [1,2] drops the original first and second wires
    got = load_program("decl f(qs) { skip; } :: call f(qs - [1,2]);").body.arg
    assert got == A.Remove(A.Remove(A.SetVar(), A.IntLit(2)), A.IntLit(1))


@pytest.mark.parametrize(
    "src",
    [
        ":: qs[1] *= NOT",  # missing semicolon
        "decl f(qs) { skip; }, decl f(qs) { skip; } :: skip;",
        ":: call g(qs);",
        ":: qs[1] *= FOO;",
        "decl f(qs) { skip; :: skip;",
    ],
)
def test_parse_errors(src):
    with pytest.raises(ParseError):
        parse_program(src)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse_program(":: skip;\n:: skip;")
    assert exc.value.line == 2


def test_missing_branch_label():
    with pytest.raises(DesugarError):
        load_program(":: qcase qs[1], qs[2] of { 00 -> skip; 01 -> skip; 10 -> skip; }")
