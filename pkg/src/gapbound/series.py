"""Exact truncated Laurent series at a point of P^1.

A ``TruncatedSeries`` knows every coefficient below ``order`` exactly and
nothing above it. Binary operations work out the largest window their
inputs justify instead of assuming a shared precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from gmpy2 import mpq

from .algebra import Polynomial, RationalFunction, to_rational
from .errors import (
    ConstantParameter,
    DivisorNotUnit,
    InnerSeriesNotVanishing,
    NotALocalParameter,
    WindowTooSmall,
    ZeroFunction,
)
from .places import INFINITY, PlaceCluster, valuation

_ZERO = mpq(0)


@dataclass(frozen=True)
class TruncatedSeries:
    """``sum(coeffs[i] * u**(offset + i)) + O(u**order)``.

    Normalized: the first stored coefficient is nonzero, or the window is
    all zero, in which case ``coeffs`` is empty and ``offset == order``.
    """

    offset: int
    coeffs: tuple
    order: int

    def __post_init__(self):
        if self.offset + len(self.coeffs) != self.order:
            raise ValueError("offset + len(coeffs) must equal order")
        if self.coeffs and not self.coeffs[0]:
            raise ValueError("series is not normalized; use TruncatedSeries.make")

    @classmethod
    def make(cls, offset: int, coeffs: Sequence, order: int) -> TruncatedSeries:
        """Normalize raw data; coefficients at or beyond ``order`` are dropped."""
        cs = [to_rational(c) for c in coeffs[: max(order - offset, 0)]]
        start = 0
        while start < len(cs) and not cs[start]:
            start += 1
        if start == len(cs):
            return cls(order, (), order)
        cs = cs[start:]
        return cls(offset + start, tuple(cs), offset + start + len(cs))

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls(order, (), order)

    @classmethod
    def from_polynomial(cls, p: Polynomial, order: int) -> TruncatedSeries:
        return cls.make(0, p.coeffs + (_ZERO,) * max(order - len(p.coeffs), 0), order)

    @classmethod
    def identity(cls, order: int) -> TruncatedSeries:
        """The series u itself."""
        return cls.make(1, [1] + [0] * (order - 2), order)

    @property
    def is_zero(self) -> bool:
        """True when every coefficient in the window vanishes."""
        return not self.coeffs

    @property
    def valuation(self) -> int:
        """Exact valuation; for an all-zero window this is only a lower bound."""
        return self.offset

    def coefficient(self, k: int) -> mpq:
        if k >= self.order:
            raise WindowTooSmall(f"coefficient of u^{k} lies outside the window (order {self.order})")
        i = k - self.offset
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def terms(self):
        """Nonzero ``(exponent, coefficient)`` pairs in the window."""
        return [(self.offset + i, c) for i, c in enumerate(self.coeffs) if c]

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise WindowTooSmall(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries.make(self.offset, self.coeffs, order)

    def derivative(self) -> TruncatedSeries:
        """Formal d/du."""
        cs = [(self.offset + i) * c for i, c in enumerate(self.coeffs)]
        return TruncatedSeries.make(self.offset - 1, cs, self.order - 1)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        order = min(self.order, other.order)
        lo = min(self.offset, other.offset, order)
        cs = [self.coefficient(k) + other.coefficient(k) if k < order else _ZERO for k in range(lo, order)]
        return TruncatedSeries.make(lo, cs, order)

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(self.offset, tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        c = to_rational(other)
        if not c:
            return TruncatedSeries.zero(self.order)
        return TruncatedSeries(self.offset, tuple(c * a for a in self.coeffs), self.order)

    __rmul__ = __mul__

    def __truediv__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_div(self, other)

    def add_constant(self, c) -> TruncatedSeries:
        c = to_rational(c)
        if not c or self.order <= 0:
            return self
        if self.offset > 0:
            cs = [c] + [_ZERO] * (self.offset - 1) + list(self.coeffs)
            return TruncatedSeries.make(0, cs, self.order)
        cs = list(self.coeffs)
        cs[-self.offset] += c
        return TruncatedSeries.make(self.offset, cs, self.order)

    def __str__(self):
        body = " + ".join(f"({c})*u^{k}" for k, c in self.terms()) or "0"
        return f"{body} + O(u^{self.order})"


def _mul_coeffs(a: tuple, b: tuple, length: int) -> list:
    out = []
    la, lb = len(a), len(b)
    for k in range(length):
        lo = max(0, k - lb + 1)
        hi = min(k, la - 1)
        s = _ZERO
        for i in range(lo, hi + 1):
            s += a[i] * b[k - i]
        out.append(s)
    return out


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    offset = a.offset + b.offset
    order = min(a.order + b.offset, b.order + a.offset)
    if a.is_zero or b.is_zero:
        return TruncatedSeries.zero(order)
    return TruncatedSeries.make(offset, _mul_coeffs(a.coeffs, b.coeffs, order - offset), order)


def _unit_inverse(b: tuple, length: int) -> list:
    inv0 = 1 / b[0]
    out = [inv0]
    lb = len(b)
    for k in range(1, length):
        s = _ZERO
        for j in range(1, min(k, lb - 1) + 1):
            s += b[j] * out[k - j]
        out.append(-s * inv0)
    return out


def series_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    if b.is_zero:
        raise DivisorNotUnit("divisor series vanishes on its whole window")
    # relative precision of the quotient is the smaller of the two
    order = min(a.order - b.offset, b.order - 2 * b.offset + a.offset)
    offset = a.offset - b.offset
    if a.is_zero:
        return TruncatedSeries.zero(order)
    length = order - offset
    inv = _unit_inverse(b.coeffs, length)
    return TruncatedSeries.make(offset, _mul_coeffs(a.coeffs, tuple(inv), length), order)


def _one(order: int) -> TruncatedSeries:
    return TruncatedSeries.make(0, [1] + [0] * (order - 1), order)


def series_pow(s: TruncatedSeries, e: int) -> TruncatedSeries:
    if e == 0:
        return _one(s.order - s.offset)
    if e < 0:
        if s.is_zero:
            raise DivisorNotUnit("negative power of a vanishing series")
        s = series_div(_one(s.order - s.offset), s)
        e = -e
    result = None
    base = s
    while e:
        if e & 1:
            result = base if result is None else series_mul(result, base)
        e >>= 1
        if e:
            base = series_mul(base, base)
    return result


def series_compose(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """a(b(u)); b must vanish at 0."""
    if b.offset < 1:
        raise InnerSeriesNotVanishing("inner series must have positive valuation")
    vb = b.offset
    if a.is_zero:
        return TruncatedSeries.zero(vb * a.order)
    if a.offset < 0 and b.is_zero:
        raise DivisorNotUnit("Laurent outer series needs a nonzero inner series")
    # Horner on the unit part; the O(1) start encodes a's truncation error
    acc = TruncatedSeries.zero(0)
    for c in reversed(a.coeffs):
        acc = series_mul(acc, b).add_constant(c)
    if a.offset:
        acc = series_mul(acc, series_pow(b, a.offset))
    return acc


def series_reverse(s: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse r with s(r(u)) = u = r(s(u)).

    Lagrange inversion: [u^n] r = (1/n) [t^(n-1)] (t / s(t))^n.
    """
    if s.offset != 1 or s.is_zero:
        raise NotALocalParameter("reversion needs a series with valuation exactly 1")
    n_max = s.order - 1
    if n_max < 1:
        return TruncatedSeries.zero(s.order)
    phi = _unit_inverse(s.coeffs, n_max)
    phi_t = tuple(phi)
    power = list(phi)
    coeffs = [power[0]]
    for n in range(2, n_max + 1):
        power = _mul_coeffs(tuple(power), phi_t, n_max)
        coeffs.append(power[n - 1] / n)
    return TruncatedSeries.make(1, coeffs, s.order)


def _is_infinity(p) -> bool:
    return p is INFINITY or (isinstance(p, str) and p.strip().lower() in ("inf", "infinity", "oo"))


def _local_polys(f: RationalFunction, p):
    """Numerator and denominator in the local coordinate at p, together with
    an extra exponent: f = u^extra * num(u) / den(u)."""
    if _is_infinity(p):
        return f.num.reciprocal(), f.den.reciprocal(), f.den.degree - f.num.degree
    p = to_rational(p)
    return f.num.shift(p), f.den.shift(p), 0


def expand_at(f: RationalFunction, p, order: int) -> TruncatedSeries:
    """Laurent expansion of f at p (rational or infinity) below ``order``."""
    if f.is_zero():
        raise ZeroFunction("cannot expand the zero function")
    num, den, extra = _local_polys(f, p)
    vn, vd = num.low_degree(), den.low_degree()
    v = extra + vn - vd
    if order <= v:
        raise WindowTooSmall(f"order {order} does not exceed the valuation {v}")
    a = num.coeffs[vn:]
    b = den.coeffs[vd:]
    length = order - v
    inv0 = 1 / b[0]
    out = []
    lb = len(b)
    for k in range(length):
        s = a[k] if k < len(a) else _ZERO
        for j in range(1, min(k, lb - 1) + 1):
            s -= b[j] * out[k - j]
        out.append(s * inv0)
    return TruncatedSeries.make(v, out, order)


def local_parameter_check(x: RationalFunction, p) -> None:
    if x.is_zero() or x.is_constant():
        raise NotALocalParameter(f"{x} is constant")
    v = valuation(x, INFINITY if _is_infinity(p) else PlaceCluster.at(p))
    if v != 1:
        raise NotALocalParameter(f"v_p({x}) = {v} at p = {p}, need 1")


class _PowerTable:
    """Powers of the reverted parameter series, extended on demand."""

    def __init__(self, r: TruncatedSeries):
        self.powers = [None, r]

    def get(self, k: int) -> TruncatedSeries:
        while len(self.powers) <= k:
            self.powers.append(series_mul(self.powers[-1], self.powers[1]))
        return self.powers[k]


@lru_cache(maxsize=64)
def _parameter_table(x: RationalFunction, p, order: int) -> _PowerTable:
    return _PowerTable(series_reverse(expand_at(x, p, order)))


def _poly_of_series(poly: Polynomial, table: _PowerTable, order: int) -> TruncatedSeries:
    cs = [_ZERO] * order
    for k, c in enumerate(poly.coeffs):
        if not c:
            continue
        if k == 0:
            cs[0] += c
            continue
        pk = table.get(k)
        for i, a in enumerate(pk.coeffs):
            e = pk.offset + i
            if e >= order:
                break
            cs[e] += c * a
    return TruncatedSeries.make(0, cs, order)


def expand_in_x(f: RationalFunction, x: RationalFunction, p, order: int) -> TruncatedSeries:
    """Expansion of f in powers of the local parameter x at p.

    Equal to ``series_compose(expand_at(f, p, N), series_reverse(expand_at(x, p, N)))``;
    computed by substituting the reverted parameter into the local numerator
    and denominator so that only polynomial-size compositions are needed.
    """
    if f.is_zero():
        raise ZeroFunction("cannot expand the zero function")
    local_parameter_check(x, p)
    if not _is_infinity(p):
        p = to_rational(p)
    num, den, extra = _local_polys(f, p)
    vn, vd = num.low_degree(), den.low_degree()
    if order <= extra + vn - vd:
        raise WindowTooSmall(f"order {order} does not exceed the valuation {extra + vn - vd}")
    # den's leading zero cancels precision; widen the working window to cover it
    work = order + 2 * vd + 3 * max(0, -extra)
    table = _parameter_table(x, "inf" if _is_infinity(p) else p, work)
    ns = _poly_of_series(num, table, work)
    ds = _poly_of_series(den, table, work)
    q = series_div(ns, ds)
    if extra:
        q = series_mul(q, series_pow(table.get(1), extra))
    return q.truncate(order)


def derivative_wrt_x(f: RationalFunction, x: RationalFunction, i: int) -> RationalFunction:
    """i-th derivative of f with respect to x, via d/dx = (dx/dt)^-1 d/dt."""
    dx = x.derivative()
    if dx.is_zero():
        raise ConstantParameter(f"{x} is constant")
    for _ in range(i):
        f = f.derivative() / dx
    return f
