"""Places of P^1 over Q and the valuations attached to them.

A finite place cluster is a monic squarefree polynomial ``c``: it stands
for the ``deg c`` complex roots of ``c`` at once, which is sound as long
as every function being inspected has the same order at each of those
roots. ``cluster_table`` builds tables with that property, so callers
never need a factorization over Q.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd as igcd
from typing import Optional

import numpy as np
from gmpy2 import mpq

from .algebra import (
    Polynomial,
    RationalFunction,
    coprime_refine,
    lcm_of_denominators,
    poly_gcd,
    squarefree_decomposition,
)
from .errors import ConstantFunction, HeterogeneousCluster, VerificationFailure, ZeroFunction


@dataclass(frozen=True)
class PlaceCluster:
    poly: Optional[Polynomial] = None  # None means the point at infinity

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    @classmethod
    def finite(cls, poly: Polynomial) -> PlaceCluster:
        if poly.degree < 1 or poly.lc != 1:
            raise ValueError(f"place cluster needs a monic nonconstant polynomial, got {poly}")
        return cls(poly)

    @classmethod
    def at(cls, point) -> PlaceCluster:
        """The degree-1 place t = point."""
        return cls(Polynomial.linear(point))

    def sort_key(self):
        return (1, ()) if self.poly is None else (0, self.poly.sort_key())

    def __str__(self):
        return "inf" if self.poly is None else f"[{self.poly}]"


INFINITY = PlaceCluster()


def _multiplicity(p: Polynomial, c: Polynomial) -> int:
    k = 0
    while p.degree >= c.degree:
        q, r = divmod(p, c)
        if r:
            break
        p = q
        k += 1
    if poly_gcd(p, c).degree > 0:
        raise HeterogeneousCluster(
            f"roots of {c} occur with different multiplicities in {p}; refine the cluster first"
        )
    return k


def valuation(f: RationalFunction, q: PlaceCluster) -> int:
    """Order of f at (every point of) q; negative for poles."""
    if f.is_zero():
        raise ZeroFunction("valuation of the zero function")
    if q.is_infinity:
        return f.den.degree - f.num.degree
    return _multiplicity(f.num, q.poly) - _multiplicity(f.den, q.poly)


def valuation_at_point(f: RationalFunction, point) -> int:
    return valuation(f, PlaceCluster.at(point))


def _rational_roots(p: Polynomial) -> list:
    """Rational roots of a squarefree polynomial.

    Candidates come from floating-point roots; each is confirmed by exact
    evaluation, so a miss only costs a coarser cluster, never a wrong one.
    """
    if p.degree < 1:
        return []
    scale = lcm_of_denominators(p.coeffs)
    ints = [int(c * scale) for c in p.coeffs]
    content = 0
    for a in ints:
        content = igcd(content, a)
    ints = [a // content for a in ints]
    lead = abs(ints[-1])
    roots = set()
    if not ints[0]:
        roots.add(0)
    try:
        approx = np.roots([float(a) for a in reversed(ints)])
    except (OverflowError, np.linalg.LinAlgError):
        approx = []
    for z in approx:
        if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
            continue
        for cand_num in {int(np.floor(z.real * lead)), int(np.ceil(z.real * lead))}:
            r = mpq(cand_num, lead)
            if not p(r):
                roots.add(r)
    return sorted(roots)


def split_rational_roots(p: Polynomial) -> list:
    """Split a monic squarefree polynomial into its linear factors over Q
    and one remaining cofactor (omitted when constant)."""
    pieces = []
    rest = p
    for r in _rational_roots(p):
        lin = Polynomial.linear(r)
        pieces.append(lin)
        rest = rest.exact_div(lin)
    if rest.degree > 0:
        pieces.append(rest.monic())
    return pieces


def cluster_table(*functions: RationalFunction) -> list:
    """Finite place clusters on which every given function has constant
    valuation, covering all their zeros and poles. Sorted deterministically;
    infinity is not included."""
    pieces = []
    for f in functions:
        for p in (f.num, f.den):
            if p.is_zero():
                continue
            pieces.extend(factor for factor, _ in squarefree_decomposition(p))
    basis = coprime_refine(pieces)
    clusters = []
    for b in basis:
        clusters.extend(PlaceCluster(piece) for piece in split_rational_roots(b))
    clusters.sort(key=PlaceCluster.sort_key)
    return clusters


def height(f: RationalFunction) -> int:
    """Total pole order of f over all complex points, infinity included."""
    if f.is_zero():
        raise ZeroFunction("height of the zero function")
    h = -sum(q.degree * min(valuation(f, q), 0) for q in cluster_table(f))
    h -= min(valuation(f, INFINITY), 0)
    expected = max(f.num.degree, f.den.degree)
    if h != expected:
        raise VerificationFailure(
            f"height mismatch for {f}: valuation sum {h} != {expected}",
            {"f": str(f)},
        )
    return h


def dx_derivative(x: RationalFunction) -> RationalFunction:
    if x.is_constant():
        raise ConstantFunction(f"{x} is constant")
    return x.derivative()


def dxdxq_valuation(x: RationalFunction, q: PlaceCluster, dx: Optional[RationalFunction] = None) -> int:
    """Valuation at q of dx/dx_q for a local parameter x_q at q.

    Finite q uses x_q = t - root; at infinity x_q = 1/t, contributing the
    factor dt/dx_q = -t^2.
    """
    if dx is None:
        dx = dx_derivative(x)
    v = valuation(dx, q)
    return v - 2 if q.is_infinity else v


def support(x: RationalFunction) -> list:
    """Zeros and poles of x as ``[(cluster, valuation), ...]``."""
    if x.is_constant():
        raise ConstantFunction(f"{x} is constant")
    table = [(q, valuation(x, q)) for q in cluster_table(x)]
    vinf = valuation(x, INFINITY)
    if vinf:
        table.append((INFINITY, vinf))
    return [(q, v) for q, v in table if v]


def support_count(x: RationalFunction) -> int:
    return sum(q.degree for q, _ in support(x))
