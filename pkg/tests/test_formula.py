import pytest

from hqe.errors import FormulaSyntaxError
from hqe.field import Field
from hqe.formula import (
    ExistsF,
    ExistsRV,
    PolyZero,
    RVEq,
    free_vars,
    has_field_quantifier,
    normalize,
    parse_field_term,
    parse_formula,
    print_formula,
    subst,
    FLit,
)

GOLDEN_LAURENT = [
    "EX x:K. rv[0](x^2 - t^2) = rv[0](0)",
    "EX y:K. y^2 - t^2 = 0",
    "EX w:RV[0]. oplus[0](rv[0](t), rv[0](1), w)",
    "v(rv[0](t)) < v(rv[0](1 + t))",
    "v(rv[1](x)) != v(rv[1](y))",
    "true & !false | false -> true",
    "ALL x:K. x = 0 -> rv[1](x + 1) = rv[1]{v=0; unit=1,0}",
    "EX x:K. EX w:RV[2]. rv[2](x)*w^2 = proj[2](rv[3](t)) & v(w) = v(rv[2](t))",
    "rv[0](t^2) = rv[0](2*t^2)",
    "sum[0](rv[1](t), rv[1](t^2)) = rv[0](t + t^2)",
    "x*y - t*x + 5 = 0",
    "-3*x^2 + 1/2*t = 0",
]


@pytest.mark.parametrize("text", GOLDEN_LAURENT)
def test_roundtrip_is_fixpoint(laurent, text):
    once = normalize(laurent, text)
    assert normalize(laurent, once) == once


def test_ast_structure(laurent):
    phi = parse_formula(laurent, "EX x:K. rv[0](x^2 - t^2) = rv[0](0)")
    assert isinstance(phi, ExistsF)
    assert has_field_quantifier(phi)
    body = phi.body
    assert isinstance(body, RVEq)


def test_equation_sugar(laurent):
    phi = parse_formula(laurent, "EX y:K. y^2 = t^2")
    assert isinstance(phi.body, PolyZero)
    same = parse_formula(laurent, print_formula(phi))
    assert print_formula(same) == print_formula(phi)


def test_sort_tracking(laurent):
    phi = parse_formula(laurent, "EX w:RV[0]. w = rv[0](1)")
    assert isinstance(phi, ExistsRV) and phi.order == 0
    with pytest.raises(FormulaSyntaxError):
        parse_formula(laurent, "EX w:RV[0]. w + 1 = 0")


def test_free_vars_and_subst(laurent):
    phi = parse_formula(laurent, "rv[0](x - c) = rv[0](t)")
    assert free_vars(phi) == {"x", "c"}
    bound = subst(phi, {"c": FLit(laurent.one())})
    assert free_vars(bound) == {"x"}


def test_rv_free_vars_with_declared_sorts(laurent):
    D = parse_formula(laurent, "v(w1) < v(w2) | w1 = rv[0]{inf}", rv_vars={"w1": 0, "w2": 0})
    assert free_vars(D) == {"w1", "w2"}
    out = print_formula(D)
    assert parse_formula(laurent, out, rv_vars={"w1": 0, "w2": 0}) == D


def test_padic_formulas(padic2):
    phi = parse_formula(padic2, "EX y:K. y^2 = 17")
    assert isinstance(phi, ExistsF)
    assert normalize(padic2, "EX y:K. y^2 = 17") == "EX y:K. y^2 - 17 = 0"


def test_field_term_parser(laurent):
    term = parse_field_term(laurent, "t * t^-1")
    from hqe.semantics import eval_field_term

    assert eval_field_term(term, {}, laurent) == laurent.one()
    term2 = parse_field_term(laurent, "(1 + t)^2 - 2*t")
    assert eval_field_term(term2, {}, laurent) == laurent.parse("1 + t^2")


def test_syntax_error_position(laurent):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(laurent, "EX x:K. rv[0](x = 0")
    with pytest.raises(FormulaSyntaxError):
        parse_formula(laurent, "x + = 0")
