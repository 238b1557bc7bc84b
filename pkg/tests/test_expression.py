"""
Scenario expression language: parsing, printing and evaluation
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from runner.errors import ExpressionDomainError, ExpressionSyntaxError
from runner.expression import (
    BinOp,
    Call,
    Neg,
    Number,
    Symbol,
    as_expression,
    parse_expression,
    to_sexpr,
    to_text,
)


@pytest.mark.parametrize(
    "text, sexpr",
    [
        ("sin(2*pi*x1)", "sin(mul(mul(2,pi),x1))"),
        ("x0*x1 + x2^2", "add(mul(x0,x1),pow(x2,2))"),
        ("-x0^2", "neg(pow(x0,2))"),
        ("2^3^2", "pow(2,pow(3,2))"),
        ("2^-x0", "pow(2,neg(x0))"),
        ("1 - 2 - 3", "sub(sub(1,2),3)"),
        ("8/4/2", "div(div(8,4),2)"),
        ("atan2(x1, x0)", "atan2(x1,x0)"),
        ("(x0 + 1)*(x0 - 1)", "mul(add(x0,1),sub(x0,1))"),
        ("--x0", "neg(neg(x0))"),
        ("1.5e-3*x10", "mul(0.0015,x10)"),
    ],
)
def test_precedence_and_associativity(text, sexpr):
    assert to_sexpr(parse_expression(text).root) == sexpr


@pytest.mark.parametrize(
    "text, canonical",
    [
        ("(1 - 2) - 3", "1 - 2 - 3"),
        ("1 - (2 - 3)", "1 - (2 - 3)"),
        ("(x0^2)^3", "(x0^2)^3"),
        ("-(x0*x1)", "-(x0*x1)"),
        ("(-x0)^2", "(-x0)^2"),
        ("x0 * ( x1 )", "x0*x1"),
        ("2.0", "2"),
    ],
)
def test_canonical_text(text, canonical):
    assert parse_expression(text).canonical == canonical


@pytest.mark.parametrize(
    "text, offset",
    [
        ("2*+3", 2),
        ("x0 +", 4),
        ("sin(x0", 6),
        ("foo(x0)", 0),
        ("x0 $ 1", 3),
        ("atan2(x0)", 8),
        ("x01", 0),
        ("(x0))", 4),
        ("π + x0", 0),
        ("x0 + π*x1", 5),
    ],
)
def test_syntax_errors_report_byte_offsets(text, offset):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(text)
    assert info.value.offset == offset
    assert str(info.value).endswith(f"at offset {offset}")


def test_byte_offsets_count_utf8():
    # a no-break space is one character but two bytes
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("x0\u00a0+ $")
    assert info.value.offset == 6


def test_overflowing_literal():
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("1e999")


# ----------------------------------------------------------------------
# round trip
# ----------------------------------------------------------------------
numbers = st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False).map(Number)
symbols = st.sampled_from(["x0", "x1", "x2", "pi"]).map(Symbol)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/", "^"]), children, children),
        st.builds(Call, st.sampled_from(["sin", "cos", "exp", "log", "sqrt"]), children.map(lambda c: (c,))),
        st.builds(lambda a, b: Call("atan2", (a, b)), children, children),
    )


trees = st.recursive(st.one_of(numbers, symbols), _extend, max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(trees)
def test_printing_then_parsing_gives_the_same_tree(tree):
    assert parse_expression(to_text(tree)).root == tree


# ----------------------------------------------------------------------
# evaluation
# ----------------------------------------------------------------------
def test_evaluation_matches_numpy():
    pts = np.random.default_rng(1).uniform(0.1, 1.0, size=(20, 3))
    expr = parse_expression("sin(2*pi*x1)*exp(x0) + sqrt(x2)/x0 - 2^x1")
    expected = np.sin(2 * math.pi * pts[:, 1]) * np.exp(pts[:, 0]) + np.sqrt(pts[:, 2]) / pts[:, 0] - 2 ** pts[:, 1]
    assert np.allclose(expr.evaluate(pts), expected)
    assert expr.coordinates == {0, 1, 2}


@pytest.mark.parametrize("text", ["log(x0 - 1)", "sqrt(x0 - 1)", "1/(x0 - 0.5)", "(x0 - 1)^0.5", "(x0 - 0.5)^-1"])
def test_domain_errors(text):
    pts = np.array([[0.5], [0.75]])
    with pytest.raises(ExpressionDomainError):
        parse_expression(text).evaluate(pts)


def test_missing_coordinate_on_evaluation():
    with pytest.raises(ExpressionDomainError):
        parse_expression("x3").evaluate(np.zeros((2, 2)))


def test_fields_carry_symbolic_partials():
    field = parse_expression("x0^2*x1 + atan2(x1, x0)").to_field()
    pts = np.array([[1.0, 2.0], [0.5, -1.0]])
    expected = 2 * pts[:, 0] * pts[:, 1] - pts[:, 1] / (pts[:, 0] ** 2 + pts[:, 1] ** 2)
    assert np.allclose(field.partial(0).evaluate(pts), expected, rtol=1e-13, atol=0)
    assert repr(field) == "x0^2*x1 + atan2(x1, x0)"


@pytest.mark.parametrize("text", ["sin(2*pi*x1)*exp(x0)", "sqrt(1 + x0^2)/(2 + cos(x1))", "-x0^3 + log(2 + x1)"])
def test_field_matches_the_tree_evaluator(text):
    expr = parse_expression(text)
    pts = np.random.default_rng(3).uniform(-1.0, 1.0, size=(40, 2))
    assert np.allclose(expr.to_field().evaluate(pts), expr.evaluate(pts), rtol=1e-13, atol=1e-15)


def test_as_expression_accepts_numbers_and_rejects_booleans():
    assert as_expression(-2).canonical == "-2"
    assert as_expression(0.25).canonical == "0.25"
    with pytest.raises(ValueError):
        as_expression(True)
    with pytest.raises(ValueError):
        as_expression([1, 2])
