"""Rational-function expressions in the variable ``t``.

Precedence from loosest to tightest: ``+ -``, ``* /``, unary minus,
``^``. Binary operators are left associative except ``^``. Exponents
must evaluate to integer constants. Implicit multiplication is rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .algebra import RationalFunction
from .errors import DivideByZeroPolynomial, ExpressionSyntaxError, NonIntegerExponent

VARIABLE = "t"


@dataclass(frozen=True)
class Const:
    value: Fraction
    pos: int = 0


@dataclass(frozen=True)
class Var:
    name: str = VARIABLE
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: int = 0


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: int = 0


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    pos: int = 0


Node = Union[Const, Var, Neg, BinOp, Pow]

_TOKEN = re.compile(r"(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_]\w*)|(\S)")

_BINARY = {"+": (10, 11), "-": (10, 11), "*": (20, 21), "/": (20, 21), "^": (41, 40)}
_UNARY_BP = 30


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        number, name, op = m.groups()
        if number is not None:
            tokens.append(("num", Fraction(number), pos))
        elif name is not None:
            tokens.append(("name", name, pos))
        elif op in "+-*/^()":
            tokens.append(("op", op, pos))
        else:
            raise ExpressionSyntaxError(f"unexpected character {op!r}", pos)
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.advance()
        if val != value:
            found = "end of input" if kind == "end" else repr(val)
            raise ExpressionSyntaxError(f"expected {value!r}, found {found}", pos)

    def parse(self) -> Node:
        node = self.expression(0)
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {val!r}", pos)
        return node

    def prefix(self) -> Node:
        kind, val, pos = self.advance()
        if kind == "num":
            return Const(val, pos)
        if kind == "name":
            if val != VARIABLE:
                raise ExpressionSyntaxError(f"unknown name {val!r}; the variable is {VARIABLE!r}", pos)
            return Var(val, pos)
        if val == "(":
            node = self.expression(0)
            self.expect(")")
            return node
        if val == "-":
            return Neg(self.expression(_UNARY_BP), pos)
        if val == "+":
            return self.expression(_UNARY_BP)
        found = "end of input" if kind == "end" else repr(val)
        raise ExpressionSyntaxError(f"expected an operand, found {found}", pos)

    def expression(self, min_bp: int) -> Node:
        left = self.prefix()
        while True:
            kind, val, pos = self.peek()
            if kind in ("num", "name") or val == "(":
                raise ExpressionSyntaxError("implicit multiplication is not supported", pos)
            if kind != "op" or val not in _BINARY:
                return left
            lbp, rbp = _BINARY[val]
            if lbp < min_bp:
                return left
            self.advance()
            right = self.expression(rbp)
            if val == "^":
                left = Pow(left, _integer_exponent(right, pos), pos)
            else:
                left = BinOp(val, left, right, pos)


def _integer_exponent(node: Node, pos: int) -> int:
    try:
        value = _constant_value(node)
    except (ValueError, ZeroDivisionError):
        raise NonIntegerExponent("exponent must be an integer constant", pos) from None
    if value.denominator != 1:
        raise NonIntegerExponent(f"exponent {value} is not an integer", pos)
    return int(value)


def _constant_value(node: Node) -> Fraction:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg):
        return -_constant_value(node.operand)
    if isinstance(node, Pow):
        return _constant_value(node.base) ** node.exponent
    if isinstance(node, BinOp):
        a, b = _constant_value(node.left), _constant_value(node.right)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if not b:
            raise ValueError("division by zero")
        return a / b
    raise ValueError("not a constant")


def parse_expression(text: str) -> Node:
    return _Parser(text).parse()


def evaluate(node: Node) -> RationalFunction:
    if isinstance(node, Const):
        return RationalFunction.constant(node.value)
    if isinstance(node, Var):
        return RationalFunction.t()
    if isinstance(node, Neg):
        return -evaluate(node.operand)
    if isinstance(node, Pow):
        base = evaluate(node.base)
        if node.exponent < 0 and base.is_zero():
            raise DivideByZeroPolynomial(f"zero raised to a negative power (at position {node.pos})")
        return base ** node.exponent
    left, right = evaluate(node.left), evaluate(node.right)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if right.is_zero():
        raise DivideByZeroPolynomial(f"division by zero (at position {node.pos})")
    return left / right


def parse_function(text: str) -> RationalFunction:
    """Parse and evaluate to a reduced rational function."""
    return evaluate(parse_expression(text))
