"""Exact Taylor gap sequences of rational functions on P^1 and the
effective bound on how sparse they can be."""

__version__ = "0.1.0"

from .algebra import BigRational, Polynomial, RationalFunction, coprime_refine, poly_gcd, squarefree_decomposition
from .expr import parse_expression, parse_function
from .gaps import (
    BoundInputs,
    BoundReport,
    GapSequence,
    bound_inputs,
    compute_S1,
    compute_S2_sum,
    corollary_bound,
    extract_gaps,
    polynomial_in_x_check,
    theorem_bound,
    verify_bounds,
)
from .places import INFINITY, PlaceCluster, dxdxq_valuation, height, support, valuation
from .series import (
    TruncatedSeries,
    derivative_wrt_x,
    expand_at,
    expand_in_x,
    series_compose,
    series_div,
    series_mul,
    series_reverse,
)
