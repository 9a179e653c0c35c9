from fractions import Fraction

import pytest
from hypothesis import strategies as st

from gapbound.algebra import Polynomial, RationalFunction
from gapbound.expr import parse_function

T = RationalFunction.t()


@pytest.fixture
def t():
    return T


def rf(text: str) -> RationalFunction:
    return parse_function(text)


def poly(*coeffs) -> Polynomial:
    return Polynomial(coeffs)


small_ints = st.integers(min_value=-6, max_value=6)


@st.composite
def polynomials(draw, max_degree=5, nonzero=False, min_degree=0):
    deg = draw(st.integers(min_value=min_degree, max_value=max_degree))
    coeffs = draw(st.lists(small_ints, min_size=deg + 1, max_size=deg + 1))
    if nonzero or min_degree > 0:
        coeffs[-1] = draw(small_ints.filter(bool))
    return Polynomial(coeffs)


@st.composite
def rational_functions(draw, max_degree=4, nonconstant=False):
    num = draw(polynomials(max_degree=max_degree, nonzero=True))
    den = draw(polynomials(max_degree=max_degree, nonzero=True))
    f = RationalFunction(num, den)
    if nonconstant and f.is_constant():
        f = f + T
    return f


@st.composite
def local_parameters(draw, max_degree=3):
    """Nonconstant x with v_0(x) = 1: x = t * unit, unit(0) != 0."""
    num = draw(polynomials(max_degree=max_degree, nonzero=True))
    den = draw(polynomials(max_degree=max_degree, nonzero=True))
    if not num[0]:
        num = num + 1
    if not den[0]:
        den = den + 1
    return RationalFunction(Polynomial.t() * num, den)


def fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
