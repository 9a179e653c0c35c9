from fractions import Fraction

import pytest
from hypothesis import given

from gapbound.errors import DivideByZeroPolynomial, ExpressionSyntaxError, NonIntegerExponent
from gapbound.expr import BinOp, Neg, Pow, Var, parse_expression, parse_function

from conftest import poly, rational_functions, rf


def test_sharp_family_member():
    f = parse_function("1 + t^3/(1 - t^2)")
    assert f.num == poly(-1, 0, 1, -1) and f.den == poly(-1, 0, 1)


def test_variable():
    assert parse_expression("t") == Var("t", 0)


def test_quotient_reduces():
    node = parse_expression("(1+t)^2/(1-t)")
    assert isinstance(node, BinOp) and node.op == "/"
    assert parse_function("(1+t)^2/(1-t)") == rf("-(t^2 + 2*t + 1)/(t - 1)")


def test_precedence():
    assert parse_function("-t^2") == -(rf("t") ** 2)
    assert parse_function("2^3^2") == rf("512")
    assert parse_function("8/4/2") == rf("1")
    assert parse_function("1 - 2 - 3") == rf("-4")
    assert parse_function("1 + 2*t^2") == rf("2*t*t + 1")
    assert isinstance(parse_expression("-t^2"), Neg)
    assert isinstance(parse_expression("t^-1"), Pow)


def test_decimal_constants_are_exact():
    assert parse_function("0.1*t") == rf("t/10")
    assert parse_function("1.5").num[0] == Fraction(3, 2)


def test_whitespace_insignificant():
    assert parse_function("  ( 1+ t ) ^ 2  ") == parse_function("(1+t)^2")


def test_negative_integer_exponent():
    assert parse_function("t^-2") == rf("1/t^2")
    assert parse_function("t^(1-3)") == rf("1/t^2")


@pytest.mark.parametrize("text,pos", [("1 +", 3), ("2t", 1), ("t (1+t)", 2), ("(t", 2), ("t $ 1", 2), ("x + 1", 0)])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(text)
    assert info.value.position == pos


@pytest.mark.parametrize("text", ["t^t", "t^(1/2)", "t^0.5", "t^(0^-1)"])
def test_non_integer_exponent(text):
    with pytest.raises(NonIntegerExponent):
        parse_expression(text)


@pytest.mark.parametrize("text", ["1/(t - t)", "0^-1", "(t-t)^-2"])
def test_division_by_zero(text):
    with pytest.raises(DivideByZeroPolynomial):
        parse_function(text)


@given(rational_functions(max_degree=5))
def test_canonical_string_round_trip(f):
    assert parse_function(f.to_string()) == f
