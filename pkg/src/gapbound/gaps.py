"""Gap sequences of x-expansions and the gap bound they must satisfy.

For f with v_p(f) = 0, f not a polynomial in the local parameter x,
write f = sum(alpha_n * x**a_n). Then for every n >= 1

    a_n <= h(f) + (n - 1) * (#S1 + sum over S2 of (v_q(dx/dx_q) + 1))

with S1 the poles of f where dx/dx_q is a unit and S2 the points where x
is a nonzero regular value but dx/dx_q vanishes. Replacing the S2 term by
2 * (#Supp(x) + 2g - 2) gives the coarser corollary bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import RationalFunction, to_rational
from .errors import (
    BoundViolation,
    NegativeWeight,
    NotNormalized,
    PolynomialInParameter,
    ZeroFunction,
)
from .places import (
    INFINITY,
    PlaceCluster,
    cluster_table,
    dx_derivative,
    dxdxq_valuation,
    height,
    support_count,
    valuation,
)
from .series import TruncatedSeries, expand_in_x, local_parameter_check

GENUS = 0


@dataclass(frozen=True)
class GapSequence:
    exponents: tuple
    coefficients: tuple
    window: int
    terminated: bool = False

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValueError("gap exponents must be strictly increasing")
        if any(not c for c in self.coefficients):
            raise ValueError("gap coefficients must be nonzero")
        if self.exponents and self.exponents[-1] >= self.window:
            raise ValueError("gap exponent outside the window")

    def __len__(self):
        return len(self.exponents)


def extract_gaps(s: TruncatedSeries) -> GapSequence:
    if s.is_zero or s.offset != 0:
        raise NotNormalized(f"series has valuation {s.offset}, expected 0")
    terms = s.terms()
    return GapSequence(tuple(k for k, _ in terms), tuple(c for _, c in terms), s.order)


def _places(*functions):
    return cluster_table(*functions) + [INFINITY]


def compute_S1(f: RationalFunction, x: RationalFunction) -> int:
    """Number of complex poles of f at which dx/dx_q is a unit."""
    dx = dx_derivative(x)
    return sum(
        q.degree
        for q in _places(f, dx)
        if valuation(f, q) < 0 and dxdxq_valuation(x, q, dx) == 0
    )


def compute_S2_sum(x: RationalFunction) -> tuple:
    """``(count, weighted_sum)`` over points where x is a nonzero regular
    value and dx/dx_q vanishes; the weight is v_q(dx/dx_q) + 1."""
    dx = dx_derivative(x)
    count = weighted = 0
    for q in _places(x, dx):
        if valuation(x, q) != 0:
            continue
        w = dxdxq_valuation(x, q, dx)
        if w > 0:
            count += q.degree
            weighted += q.degree * (w + 1)
    return count, weighted


@dataclass(frozen=True)
class BoundInputs:
    height_f: int
    s1_count: int
    s2_sum: int
    supp_x_count: int
    s2_count: int = 0
    genus: int = GENUS

    def __post_init__(self):
        if min(self.height_f, self.s1_count, self.s2_sum, self.supp_x_count, self.s2_count) < 0:
            raise ValueError("bound inputs must be non-negative")
        if self.genus != 0:
            raise ValueError("only genus 0 is supported")

    @property
    def slope(self) -> int:
        return self.s1_count + self.s2_sum


def bound_inputs(f: RationalFunction, x: RationalFunction) -> BoundInputs:
    s2_count, s2_sum = compute_S2_sum(x)
    return BoundInputs(
        height_f=height(f),
        s1_count=compute_S1(f, x),
        s2_sum=s2_sum,
        supp_x_count=support_count(x),
        s2_count=s2_count,
    )


def theorem_bound(b: BoundInputs, n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return b.height_f + (n - 1) * (b.s1_count + b.s2_sum)


def corollary_bound(b: BoundInputs, n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    weight = b.supp_x_count + 2 * b.genus - 2
    if weight < 0:
        raise NegativeWeight(f"#Supp + 2g - 2 = {weight} < 0", {"inputs": b})
    return b.height_f + (n - 1) * (b.s1_count + 2 * weight)


def polynomial_in_x_check(f: RationalFunction, x: RationalFunction, p) -> bool:
    """Exact test of whether f lies in Q[x].

    A relation f = P(x) forces deg P * h(x) = h(f), so deg P <= h(f); the
    candidate P is read off the x-expansion and confirmed as an identity of
    rational functions.
    """
    local_parameter_check(x, p)
    if f.is_zero():
        return True
    if valuation(f, PlaceCluster.at(p)) < 0:
        return False
    bound = height(f)
    s = expand_in_x(f, x, p, bound + 1)
    candidate = RationalFunction.constant(0)
    power = RationalFunction.constant(1)
    for j in range(bound + 1):
        c = s.coefficient(j)
        if c:
            candidate = candidate + power * c
        power = power * x
    return candidate == f


@dataclass(frozen=True)
class BoundRow:
    n: int
    a_n: int
    alpha_n: object
    theorem_rhs: int
    corollary_rhs: int

    @property
    def slack(self) -> int:
        return self.theorem_rhs - self.a_n


@dataclass(frozen=True)
class BoundReport:
    f: RationalFunction  # the function actually analyzed
    x: RationalFunction
    point: object
    order: int
    inputs: BoundInputs
    gaps: GapSequence
    rows: tuple = field(default_factory=tuple)
    original_f: Optional[RationalFunction] = None
    normalized_by: int = 0  # f was replaced by f / x**normalized_by

    @property
    def max_n(self) -> int:
        return self.rows[-1].n if self.rows else 0

    @property
    def slacks(self) -> list:
        return [r.slack for r in self.rows]

    @property
    def min_slack(self) -> Optional[int]:
        return min(self.slacks) if self.rows else None

    @property
    def max_slack(self) -> Optional[int]:
        return max(self.slacks) if self.rows else None

    @property
    def is_sharp(self) -> bool:
        return bool(self.rows) and all(s == 0 for s in self.slacks)

    @property
    def limsup_estimate(self) -> Optional[Fraction]:
        if not self.rows:
            return None
        last = self.rows[-1]
        return Fraction(last.a_n, last.n)

    @property
    def limsup_bound(self) -> int:
        return self.inputs.slope

    @property
    def passed(self) -> bool:
        return all(r.a_n <= r.theorem_rhs <= r.corollary_rhs for r in self.rows)


def normalize_function(f: RationalFunction, x: RationalFunction, p) -> tuple:
    """``(g, v)`` with g = f / x**v and v = v_p(f), so that v_p(g) = 0."""
    v = valuation(f, PlaceCluster.at(p))
    return (f / x ** v if v else f), v


def verify_bounds(
    f: RationalFunction,
    x: RationalFunction,
    p=0,
    order: int = 64,
    normalize: bool = False,
) -> BoundReport:
    """Expand f in x at p and compare every gap exponent with both bounds.

    Any exponent above the bound raises ``BoundViolation``: the inequality
    is a theorem, so a violation means this code is wrong.
    """
    if f.is_zero():
        raise ZeroFunction("f must be nonzero")
    p = to_rational(p)
    local_parameter_check(x, p)
    # report a failed f-not-in-Q[x] hypothesis ahead of normalization
    if polynomial_in_x_check(f, x, p):
        raise PolynomialInParameter(f"{f} is a polynomial in x = {x}")
    g, v = normalize_function(f, x, p)
    if v and not normalize:
        raise NotNormalized(f"v_p(f) = {v} != 0; pass normalize=True to analyze f / x^{v}")
    if v and polynomial_in_x_check(g, x, p):
        raise PolynomialInParameter(f"normalized {g} is a polynomial in x = {x}")
    gaps = extract_gaps(expand_in_x(g, x, p, order))
    inputs = bound_inputs(g, x)
    rows = []
    for n in range(1, len(gaps)):
        row = BoundRow(
            n=n,
            a_n=gaps.exponents[n],
            alpha_n=gaps.coefficients[n],
            theorem_rhs=theorem_bound(inputs, n),
            corollary_rhs=corollary_bound(inputs, n),
        )
        if row.a_n > row.theorem_rhs or row.theorem_rhs > row.corollary_rhs:
            raise BoundViolation(
                f"gap bound failed at n = {n}: a_n = {row.a_n}, theorem {row.theorem_rhs}, "
                f"corollary {row.corollary_rhs}",
                {"f": str(g), "x": str(x), "p": str(p), "order": order, "inputs": inputs, "row": row},
            )
        rows.append(row)
    return BoundReport(
        f=g,
        x=x,
        point=p,
        order=order,
        inputs=inputs,
        gaps=gaps,
        rows=tuple(rows),
        original_f=f,
        normalized_by=v,
    )
