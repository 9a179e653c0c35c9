from fractions import Fraction
from functools import reduce
from itertools import permutations
from math import gcd, prod

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gapbound import linalg
from gapbound.errors import InsufficientGapTerms, PartitionGap, PolynomialInParameter, ValuationMismatch
from gapbound.gaps import GapSequence, verify_bounds
from gapbound.lemmas import (
    assemble_F,
    build_gap_matrix,
    check_derivative_valuation,
    check_height_decomposition,
    check_rr_identity,
    classify_place,
    construct_auxiliary,
    derivative_valuation_sweep,
    falling_factorial,
    nullspace_vector,
    wronskian_determinant,
    wronskian_nonvanishing,
)
from gapbound.places import INFINITY, PlaceCluster, height, valuation

from conftest import local_parameters, poly, rational_functions, rf


def leibniz_det(rows) -> Fraction:
    """Oracle: permutation expansion."""
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inversions * prod(Fraction(rows[i][perm[i]]) for i in range(n))
    return total


def gaps(a, alpha, window=50):
    return GapSequence(tuple(a), tuple(Fraction(v) for v in alpha), window)


# --- gap matrix --------------------------------------------------------

def test_falling_factorial():
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(7, 0) == 1
    assert falling_factorial(2, 3) == 0


def test_matrix_geometric():
    m = build_gap_matrix(gaps((0, 1, 2), (1, 1, 1)), 2)
    assert [list(r) for r in m.entries] == [[1, 1, 0], [0, 1, 1], [0, 1, 2]]


def test_matrix_n1():
    m = build_gap_matrix(gaps((0, 4), (3, -2)), 1)
    assert [list(r) for r in m.entries] == [[1, 3], [0, -2]]


def test_matrix_needs_terms():
    with pytest.raises(InsufficientGapTerms):
        build_gap_matrix(gaps((0, 1), (1, 1)), 2)


# --- nullspace ---------------------------------------------------------

def test_nullspace_n1():
    assert nullspace_vector(build_gap_matrix(gaps((0, 1), (1, 1)), 1)) == (-1, 1)


def test_nullspace_geometric():
    assert nullspace_vector(build_gap_matrix(gaps((0, 1, 2), (1, 1, 1)), 2)) == (1, -1, 1)


def test_nullspace_scaled_constant():
    assert nullspace_vector(build_gap_matrix(gaps((0, 3), (2, 5)), 1)) == (-2, 1)


@st.composite
def gap_sequences(draw, n_max=6):
    n = draw(st.integers(1, n_max))
    steps = draw(st.lists(st.integers(1, 4), min_size=n, max_size=n))
    a = [0]
    for s in steps:
        a.append(a[-1] + s)
    alpha = draw(st.lists(st.fractions(max_denominator=5).filter(bool), min_size=n + 1, max_size=n + 1))
    return gaps(a, alpha, a[-1] + 1), n


@given(gap_sequences())
@settings(max_examples=60, deadline=None)
def test_nullspace_properties(data):
    g, n = data
    m = build_gap_matrix(g, n)
    c = nullspace_vector(m)
    assert c == nullspace_vector(build_gap_matrix(g, n))  # determinism
    assert any(c) and all(isinstance(v, int) for v in c)
    assert reduce(gcd, c) == 1
    image = linalg.mat_vec(m.entries, c)
    assert not any(image[:n]) and image[n]


# --- Wronskian ---------------------------------------------------------

def test_wronskian_two():
    m = build_gap_matrix(gaps((0, 1, 2), (1, 1, 1)), 2)
    assert wronskian_determinant(m) == 1 and wronskian_nonvanishing(m)


def test_wronskian_single():
    m = build_gap_matrix(gaps((0, 3), (1, Fraction(-7, 2))), 1)
    assert wronskian_determinant(m) == Fraction(-7, 2)


def test_wronskian_three():
    m = build_gap_matrix(gaps((0, 1, 2, 3), (1, 1, 1, 1)), 3)
    assert wronskian_determinant(m) == 2


@given(gap_sequences(n_max=5))
@settings(max_examples=60, deadline=None)
def test_wronskian_matches_leibniz(data):
    g, n = data
    m = build_gap_matrix(g, n)
    minor = [row[1:] for row in m.entries[1:]]
    assert wronskian_determinant(m) == leibniz_det(minor) != 0


@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_leibniz(rows):
    assert linalg.determinant(rows) == leibniz_det(rows)


# --- auxiliary function -------------------------------------------------

def test_assemble_geometric():
    aux = assemble_F(rf("1/(1-t)"), rf("t"), (1, -1, 1), 0, 2)
    assert aux.F == rf("t^2/(1-t)^2")
    assert aux.achieved_valuation == aux.series_valuation == 2
    assert aux.height_F == 2


def test_auxiliary_n1_is_shifted_f():
    f = rf("(3 + t)/(1 - 2*t)")
    res = construct_auxiliary(f, rf("t"), 0, 1)
    assert res.aux.c == (-3, 1)
    assert res.aux.F == f - 3
    assert res.aux.achieved_valuation == res.matrix.gaps.exponents[1]


def test_auxiliary_sharp_family_n1():
    res = construct_auxiliary(rf("1 + t^3/(1 - t^2)"), rf("t"), 0, 1)
    assert res.aux.F == rf("t^3/(1-t^2)")
    assert res.aux.achieved_valuation == 3 and res.aux.height_F == 3


def test_assemble_detects_wrong_vector():
    with pytest.raises(ValuationMismatch):
        assemble_F(rf("1/(1-t)"), rf("t"), (1, -1, 2), 0, 2)


@st.composite
def lemma_cases(draw):
    f = draw(rational_functions(max_degree=3, nonconstant=True))
    x = draw(st.sampled_from(["t", "t + t^3", "t/(1 - t)", "2*t - t^2"]))
    n = draw(st.integers(1, 4))
    return f, rf(x), n


@given(lemma_cases())
@settings(max_examples=30, deadline=None)
def test_lemma2_random(case):
    f, x, n = case
    assume(valuation(f, PlaceCluster.at(0)) == 0)
    try:
        report = verify_bounds(f, x, 0, 40)
    except PolynomialInParameter:
        return
    assume(report.max_n >= n)
    res = construct_auxiliary(f, x, 0, n, gaps=report.gaps)
    assert res.aux.achieved_valuation == res.aux.series_valuation == report.gaps.exponents[n]
    assert res.aux.a_n <= res.aux.height_F <= res.theorem_rhs
    assert check_height_decomposition(res.aux, f, x, n).holds


# --- derivative valuations ---------------------------------------------

def test_prop_closed_form():
    c = check_derivative_valuation(rf("1/(1-t)"), rf("t"), PlaceCluster.finite(poly(-1, 1)), 3)
    assert (c.lhs, c.rhs) == (-4, -4) and c.holds


def test_prop_base_case():
    f = rf("(t^2 + 1)/(t - 3)^2")
    q = PlaceCluster.finite(poly(-3, 1))
    c = check_derivative_valuation(f, rf("t + t^3"), q, 0)
    assert c.lhs == c.rhs == -2


def test_prop_ramified_cluster():
    q = PlaceCluster.finite(poly(Fraction(1, 3), 0, 1))
    c = check_derivative_valuation(rf("1/(1-t)"), rf("t + t^3"), q, 1)
    assert c.rhs == -2
    assert c.lhs == valuation(rf("1/((1-t)^2*(1 + 3*t^2))"), q) == -1
    assert c.holds


def test_prop_zero_derivative_passes():
    c = check_derivative_valuation(rf("t"), rf("t"), INFINITY, 2)
    assert c.lhs is None and c.holds


@given(rational_functions(max_degree=3, nonconstant=True), rational_functions(max_degree=3, nonconstant=True))
@settings(max_examples=25, deadline=None)
def test_prop_sweep_random(f, x):
    assert all(c.holds for c in derivative_valuation_sweep(f, x, 4))


# --- Riemann-Roch count -------------------------------------------------

@pytest.mark.parametrize("x,value", [("t", 0), ("t^2 - t", 1), ("t + t^3", 2)])
def test_rr_instances(x, value):
    rr = check_rr_identity(rf(x))
    assert rr.lhs_sum == rr.rhs == value


@given(rational_functions(max_degree=6, nonconstant=True))
@settings(max_examples=40, deadline=None)
def test_rr_random(x):
    assert check_rr_identity(x).holds


# --- four-case decomposition -------------------------------------------

def test_classify_place():
    assert classify_place(0, -1, -2) == "S4"
    assert classify_place(0, 0, 2) == "S2"
    assert classify_place(-1, 0, 0) == "S1"
    assert classify_place(0, 1, 0) == "S3"
    with pytest.raises(PartitionGap):
        classify_place(0, 0, -1)


def test_decomposition_geometric():
    f, x = rf("1/(1-t)"), rf("t")
    res = construct_auxiliary(f, x, 0, 2)
    dec = check_height_decomposition(res.aux, f, x, 2)
    assert dec.cases["S1"].height_F == 2 and dec.cases["S1"].bound == 2
    assert dec.cases["S4"].height_F == 0
    assert dec.height_F == 2 == dec.theorem_rhs and dec.holds


def test_decomposition_n1():
    f, x = rf("(1 + t^2)/(2 - t)^3"), rf("t")
    res = construct_auxiliary(f, x, 0, 1)
    assert res.aux.height_F <= height(f)
    assert check_height_decomposition(res.aux, f, x, 1).holds


def test_decomposition_sharp_family():
    f, x = rf("1 + t^3/(1 - t^2)"), rf("t")
    res = construct_auxiliary(f, x, 0, 2)
    dec = check_height_decomposition(res.aux, f, x, 2)
    assert dec.theorem_rhs == 5 and dec.height_F == 5 and dec.holds
