"""Constructive checks of the machinery behind the gap bound.

* the auxiliary function F = c0 + sum c_i x^(i-1) f^(i-1) vanishing to
  order exactly a_n at p, built from an exact kernel vector of the
  falling-factorial gap matrix;
* the derivative valuation inequality
  v_q(d^n f/dx^n) >= v_q(f) - n (v_q(dx/dx_q) + 1);
* v_q(dx/dx_q) = v_q(x) - 1 on the support of x;
* the genus-0 Riemann-Roch count
  sum_{q not in Supp x} v_q(dx/dx_q) = #Supp x + 2g - 2;
* the four-way split of the poles of F whose contributions add up to the
  gap bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from gmpy2 import mpq

from . import linalg
from .algebra import RationalFunction, to_rational
from .errors import (
    InsufficientGapTerms,
    PartitionGap,
    ValuationMismatch,
    VerificationFailure,
    WindowTooSmall,
)
from .gaps import GENUS, GapSequence, bound_inputs, extract_gaps, theorem_bound
from .places import (
    INFINITY,
    PlaceCluster,
    cluster_table,
    dx_derivative,
    dxdxq_valuation,
    height,
    valuation,
)
from .series import derivative_wrt_x, expand_in_x


def falling_factorial(a: int, j: int) -> int:
    out = 1
    for k in range(j):
        out *= a - k
    return out


@dataclass(frozen=True)
class GapMatrix:
    entries: tuple
    n: int
    gaps: GapSequence

    @property
    def top_rows(self) -> tuple:
        """The first n rows (the underdetermined system)."""
        return self.entries[: self.n]


def build_gap_matrix(g: GapSequence, n: int) -> GapMatrix:
    """(n+1) x (n+1) matrix whose column j >= 1 lists the coefficients of
    x^(j-1) f^(j-1) at the exponents a_0..a_n (monomial factors dropped)."""
    if n < 1:
        raise ValueError("n must be positive")
    if len(g) < n + 1:
        raise InsufficientGapTerms(f"need {n + 1} gap terms, have {len(g)}")
    a, alpha = g.exponents, g.coefficients
    rows = [tuple([mpq(1), alpha[0]] + [mpq(0)] * (n - 1))]
    for i in range(1, n + 1):
        rows.append(tuple([mpq(0)] + [alpha[i] * falling_factorial(a[i], j) for j in range(n)]))
    return GapMatrix(tuple(rows), n, g)


def nullspace_vector(m: GapMatrix) -> tuple:
    return linalg.nullspace_vector(m.top_rows, m.n + 1)


def wronskian_minor(m: GapMatrix) -> list:
    return [list(row[1:]) for row in m.entries[1:]]


def wronskian_determinant(m: GapMatrix) -> mpq:
    return linalg.determinant(wronskian_minor(m))


def wronskian_nonvanishing(m: GapMatrix) -> bool:
    return wronskian_determinant(m) != 0


@dataclass(frozen=True)
class AuxiliaryFunction:
    c: tuple
    F: RationalFunction
    achieved_valuation: int
    series_valuation: int
    height_F: int
    n: int
    a_n: int


def _x_derivative_terms(f: RationalFunction, x: RationalFunction, count: int) -> list:
    """[x^i * d^i f/dx^i for i < count]."""
    terms = []
    deriv = f
    xpow = RationalFunction.constant(1)
    for i in range(count):
        if i:
            deriv = derivative_wrt_x(deriv, x, 1)
            xpow = xpow * x
        terms.append(xpow * deriv)
    return terms


def assemble_F(f: RationalFunction, x: RationalFunction, c, p, a_n: int) -> AuxiliaryFunction:
    """Build F from the kernel vector and confirm v_p(F) = a_n two ways:
    exact rational-function valuation, and the leading exponent of F's own
    x-expansion."""
    p = to_rational(p)
    n = len(c) - 1
    F = RationalFunction.constant(c[0])
    for ci, term in zip(c[1:], _x_derivative_terms(f, x, n)):
        if ci:
            F = F + term * ci
    dump = {"f": str(f), "x": str(x), "p": str(p), "c": list(c), "F": str(F), "a_n": a_n}
    if F.is_zero():
        raise ValuationMismatch("auxiliary function vanishes identically", dump)
    v_exact = valuation(F, PlaceCluster.at(p))
    try:
        s = expand_in_x(F, x, p, a_n + 1)
        v_series = s.offset
    except WindowTooSmall:
        v_series = a_n + 1  # vanishes beyond the window: too high
    if v_exact != a_n or v_series != a_n:
        dump.update(v_exact=v_exact, v_series=v_series)
        raise ValuationMismatch(
            f"v_p(F) = {v_exact} (series {v_series}), expected a_n = {a_n}", dump
        )
    return AuxiliaryFunction(
        c=tuple(c),
        F=F,
        achieved_valuation=v_exact,
        series_valuation=v_series,
        height_F=height(F),
        n=n,
        a_n=a_n,
    )


@dataclass(frozen=True)
class Lemma2Result:
    matrix: GapMatrix
    aux: AuxiliaryFunction
    wronskian: mpq
    theorem_rhs: int

    @property
    def holds(self) -> bool:
        return self.wronskian != 0 and self.aux.a_n <= self.aux.height_F <= self.theorem_rhs


def construct_auxiliary(
    f: RationalFunction, x: RationalFunction, p, n: int, gaps: Optional[GapSequence] = None, order: int = 64
) -> Lemma2Result:
    """Full constructive pipeline for one n: gap matrix, kernel vector, F."""
    p = to_rational(p)
    if gaps is None or len(gaps) < n + 1:
        gaps = extract_gaps(expand_in_x(f, x, p, order))
    matrix = build_gap_matrix(gaps, n)
    det = wronskian_determinant(matrix)
    dump = {"f": str(f), "x": str(x), "p": str(p), "n": n}
    if not det:
        raise VerificationFailure("Wronskian of distinct monomials vanished", dump)
    c = nullspace_vector(matrix)
    image = linalg.mat_vec(matrix.entries, c)
    if any(image[:n]) or not image[n]:
        raise VerificationFailure("kernel vector does not isolate the x^a_n term", dict(dump, c=list(c)))
    aux = assemble_F(f, x, c, p, gaps.exponents[n])
    rhs = theorem_bound(bound_inputs(f, x), n)
    result = Lemma2Result(matrix, aux, det, rhs)
    if not result.holds:
        raise VerificationFailure(
            f"a_n <= h(F) <= bound failed: {aux.a_n}, {aux.height_F}, {rhs}", dict(dump, c=list(c))
        )
    return result


@dataclass(frozen=True)
class DerivativeCheck:
    place: PlaceCluster
    n: int
    lhs: Optional[int]  # None when the derivative vanishes identically
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs is None or self.lhs >= self.rhs


def check_derivative_valuation(
    f: RationalFunction, x: RationalFunction, q: PlaceCluster, n: int, dx: Optional[RationalFunction] = None
) -> DerivativeCheck:
    if dx is None:
        dx = dx_derivative(x)
    rhs = valuation(f, q) - n * (dxdxq_valuation(x, q, dx) + 1)
    d = derivative_wrt_x(f, x, n)
    lhs = None if d.is_zero() else valuation(d, q)
    return DerivativeCheck(q, n, lhs, rhs)


def derivative_valuation_sweep(f: RationalFunction, x: RationalFunction, max_n: int) -> list:
    """Check every place in the combined support of f, x, dx/dt and the
    derivatives themselves, for 0 <= n <= max_n."""
    dx = dx_derivative(x)
    derivs = [f]
    for _ in range(max_n):
        derivs.append(derivative_wrt_x(derivs[-1], x, 1))
    nonzero = [d for d in derivs if not d.is_zero()]
    places = cluster_table(f, x, dx, *nonzero) + [INFINITY]
    out = []
    for q in places:
        vf = valuation(f, q)
        w = dxdxq_valuation(x, q, dx)
        for n, d in enumerate(derivs):
            lhs = None if d.is_zero() else valuation(d, q)
            out.append(DerivativeCheck(q, n, lhs, vf - n * (w + 1)))
    return out


@dataclass(frozen=True)
class SupportDerivativeCheck:
    place: PlaceCluster
    v_x: int
    v_dxdxq: int

    @property
    def holds(self) -> bool:
        return self.v_dxdxq == self.v_x - 1


def check_support_derivative(x: RationalFunction) -> list:
    """v_q(dx/dx_q) against v_q(x) - 1 at every zero and pole of x."""
    dx = dx_derivative(x)
    out = []
    for q in cluster_table(x, dx) + [INFINITY]:
        vx = valuation(x, q)
        if vx:
            out.append(SupportDerivativeCheck(q, vx, dxdxq_valuation(x, q, dx)))
    return out


@dataclass(frozen=True)
class RRCheck:
    lhs_sum: int
    rhs: int
    supp_count: int

    @property
    def holds(self) -> bool:
        return self.lhs_sum == self.rhs


def check_rr_identity(x: RationalFunction) -> RRCheck:
    """Sum of v_q(dx/dx_q) away from Supp(x) against #Supp(x) + 2g - 2."""
    dx = dx_derivative(x)
    lhs = 0
    supp = 0
    for q in cluster_table(x, dx) + [INFINITY]:
        if valuation(x, q):
            supp += q.degree
        else:
            lhs += q.degree * dxdxq_valuation(x, q, dx)
    return RRCheck(lhs, supp + 2 * GENUS - 2, supp)


@dataclass(frozen=True)
class CaseContribution:
    name: str
    degree: int  # number of complex points in the case
    height_F: int  # -sum min(v_q(F), 0) over the case
    height_f: int  # -sum min(v_q(f), 0) over the case
    bound: int

    @property
    def holds(self) -> bool:
        return self.height_F <= self.bound


@dataclass(frozen=True)
class HeightDecomposition:
    cases: dict
    height_F: int
    theorem_rhs: int
    assignments: tuple = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.cases.values()) and self.height_F <= self.theorem_rhs


def classify_place(vf: int, vx: int, vdx: int) -> str:
    if vdx != 0 and vx != 0:
        return "S4"
    if vx == 0 and vdx > 0:
        return "S2"
    if vdx == 0:
        return "S1" if vf < 0 else "S3"
    raise PartitionGap(f"no case for v(f)={vf}, v(x)={vx}, v(dx/dx_q)={vdx}", {"vf": vf, "vx": vx, "vdx": vdx})


def check_height_decomposition(
    aux: AuxiliaryFunction, f: RationalFunction, x: RationalFunction, n: int
) -> HeightDecomposition:
    dx = dx_derivative(x)
    F = aux.F
    buckets = {name: {"deg": 0, "hF": 0, "hf": 0, "s2w": 0} for name in ("S1", "S2", "S3", "S4")}
    assignments = []
    for q in cluster_table(f, x, dx, F) + [INFINITY]:
        vf, vx, vdx = valuation(f, q), valuation(x, q), dxdxq_valuation(x, q, dx)
        name = classify_place(vf, vx, vdx)
        b = buckets[name]
        b["deg"] += q.degree
        b["hF"] -= q.degree * min(valuation(F, q), 0)
        b["hf"] -= q.degree * min(vf, 0)
        if name == "S2":
            b["s2w"] += q.degree * (vdx + 1)
        assignments.append((str(q), name))
    s1 = buckets["S1"]
    bounds = {
        "S1": s1["hf"] + (n - 1) * s1["deg"],
        "S2": buckets["S2"]["hf"] + (n - 1) * buckets["S2"]["s2w"],
        "S3": 0,
        "S4": buckets["S4"]["hf"],
    }
    cases = {
        name: CaseContribution(name, b["deg"], b["hF"], b["hf"], bounds[name]) for name, b in buckets.items()
    }
    total = sum(c.height_F for c in cases.values())
    if total != aux.height_F:
        raise PartitionGap(
            f"case heights sum to {total}, but h(F) = {aux.height_F}", {"F": str(F), "assignments": assignments}
        )
    return HeightDecomposition(cases, total, theorem_bound(bound_inputs(f, x), n), tuple(assignments))
