"""Exact arithmetic over Q: dense univariate polynomials in ``t`` and
reduced rational functions.

Scalars are ``gmpy2.mpq`` values (exported as ``BigRational``); they are
always reduced with a positive denominator, which is exactly the
invariant a rational scalar needs here.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import count
from math import gcd, lcm
from typing import Iterable, Sequence

from gmpy2 import invert, mpq, mpz, next_prime

from .errors import DivideByZeroPolynomial, ZeroPolynomial

BigRational = mpq

# Degree of the zero polynomial: compares below every integer and absorbs
# addition (deg(0 * p) = deg 0), so it can never pass for a real degree.
ZERO_DEGREE = float("-inf")

_ZERO = mpq(0)
_ONE = mpq(1)


def to_rational(value) -> mpq:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to ``mpq``."""
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def format_rational(value) -> str:
    """Serialize as ``"p/q"`` (denominator always written)."""
    value = mpq(value)
    return f"{value.numerator}/{value.denominator}"


class Polynomial:
    """Dense polynomial over Q; ``coeffs[k]`` is the coefficient of t^k."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list) -> Polynomial:
        # coeffs already mpq; only trailing zeros need stripping
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        p = cls.__new__(cls)
        p.coeffs = tuple(coeffs)
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls((c,))

    @classmethod
    def t(cls) -> Polynomial:
        return cls((0, 1))

    @classmethod
    def linear(cls, root) -> Polynomial:
        """The monic polynomial t - root."""
        return cls((-to_rational(root), 1))

    # -- basic properties -------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def lc(self) -> mpq:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int) -> mpq:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return _ZERO

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, type(_ZERO))):
            return self.coeffs == Polynomial.constant(other).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Polynomial", self.coeffs))
        return self._hash

    def sort_key(self):
        # linear monic t - r sorts by r; otherwise a fixed lexicographic order
        return (len(self.coeffs), tuple(-c for c in self.coeffs[:-1]))

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other)

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not isinstance(other, Polynomial):
            c = to_rational(other)
            return Polynomial._raw([c * a for a in self.coeffs]) if c else Polynomial()
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise DivideByZeroPolynomial("division by the zero polynomial")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        if len(rem) - 1 < db:
            return Polynomial(), self
        inv_lc = 1 / other.lc
        quot = [_ZERO] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            q = rem[k] * inv_lc
            quot[k - db] = q
            if q:
                for j in range(db + 1):
                    rem[k - db + j] -= q * bc[j]
        return Polynomial._raw(quot), Polynomial._raw(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Polynomial:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __truediv__(self, other):
        if isinstance(other, (Polynomial, RationalFunction)):
            return RationalFunction(self) / other
        c = to_rational(other)
        if not c:
            raise DivideByZeroPolynomial("division by zero")
        return self * (1 / c)

    def __rtruediv__(self, other):
        return RationalFunction(self._coerce(other)) / RationalFunction(self)

    # -- calculus and substitutions ----------------------------------------
    def __call__(self, value):
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self) -> Polynomial:
        return Polynomial._raw([k * c for k, c in enumerate(self.coeffs)][1:])

    def shift(self, c) -> Polynomial:
        """Return the polynomial t -> self(t + c)."""
        c = to_rational(c)
        if not c:
            return self
        out = list(self.coeffs)
        n = len(out)
        # repeated synthetic division (Taylor shift)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                out[j] += c * out[j + 1]
        return Polynomial._raw(out)

    def reciprocal(self) -> Polynomial:
        """t^deg * self(1/t)."""
        return Polynomial._raw(list(reversed(self.coeffs)))

    def low_degree(self) -> int:
        """Largest k such that t^k divides self (self nonzero)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise ZeroPolynomial("low degree of the zero polynomial")

    def monic(self) -> Polynomial:
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no monic associate")
        lc = self.lc
        if lc == 1:
            return self
        inv = 1 / lc
        return Polynomial._raw([c * inv for c in self.coeffs])

    def compose(self, other: Polynomial) -> Polynomial:
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    # -- display ----------------------------------------------------------
    def to_string(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.to_string()!r})"


def _primitive_ints(p: Polynomial) -> list:
    """Integer coefficients of the primitive associate of p (positive lc)."""
    den = reduce(lcm, (c.denominator for c in p.coeffs), mpz(1))
    ints = [c.numerator * (den // c.denominator) for c in p.coeffs]
    content = reduce(gcd, ints)
    if ints[-1] < 0:
        content = -content
    return [c // content for c in ints]


def _gcd_mod(a: list, b: list, prime: int) -> list:
    """Monic gcd of two integer coefficient lists modulo a prime."""
    a = [c % prime for c in a]
    b = [c % prime for c in b]
    for v in (a, b):
        while v and not v[-1]:
            v.pop()
    while b:
        inv = pow(int(b[-1]), -1, prime)
        db = len(b) - 1
        while len(a) - 1 >= db and a:
            q = a[-1] * inv % prime
            shift = len(a) - 1 - db
            for j in range(db + 1):
                a[shift + j] = (a[shift + j] - q * b[j]) % prime
            while a and not a[-1]:
                a.pop()
        a, b = b, a
    inv = pow(int(a[-1]), -1, prime)
    return [c * inv % prime for c in a]


_PRIMES = [next_prime(mpz(2) ** 62)]


def _prime(k: int) -> mpz:
    while len(_PRIMES) <= k:
        _PRIMES.append(next_prime(_PRIMES[-1]))
    return _PRIMES[k]


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd; gcd(0, 0) is the zero polynomial.

    Modular algorithm: gcd images modulo 62-bit primes bound the degree
    from above, are combined by CRT, and a lifted candidate is accepted
    only once it divides both inputs exactly over Q.
    """
    if a.is_zero() or b.is_zero():
        nz = b if a.is_zero() else a
        return nz.monic() if nz else nz
    if a.degree < 1 or b.degree < 1:
        return Polynomial.constant(1)
    if a.degree == 1 or b.degree == 1:
        lin, other = (a, b) if a.degree == 1 else (b, a)
        return lin.monic() if not other(-lin[0] / lin[1]) else Polynomial.constant(1)
    A, B = _primitive_ints(a), _primitive_ints(b)
    lc_gcd = gcd(A[-1], B[-1])
    image, modulus, degree = None, mpz(1), None
    for k in count():
        prime = _prime(k)
        if not A[-1] % prime or not B[-1] % prime:
            continue
        g = _gcd_mod(A, B, prime)
        d = len(g) - 1
        if d == 0:
            return Polynomial.constant(1)
        g = [c * lc_gcd % prime for c in g]
        if degree is None or d < degree:
            image, modulus, degree = g, prime, d
        elif d > degree:
            continue  # unlucky prime
        else:
            step = invert(modulus, prime)
            image = [x + modulus * ((y - x) * step % prime) for x, y in zip(image, g)]
            modulus *= prime
        half = modulus // 2
        candidate = Polynomial([c - modulus if c > half else c for c in image])
        if candidate.degree == degree and not (a % candidate) and not (b % candidate):
            return candidate.monic()
def squarefree_decomposition(p: Polynomial) -> list:
    """Yun's algorithm: ``p = lc * prod(f_i ** m_i)``.

    Returns ``[(f_i, m_i), ...]`` with monic squarefree pairwise coprime
    ``f_i`` and strictly increasing ``m_i``; constants give ``[]``.
    """
    if p.is_zero():
        raise ZeroPolynomial("squarefree decomposition of zero")
    if p.degree < 1:
        return []
    p = p.monic()
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    out = []
    m = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        if a.degree > 0:
            out.append((a, m))
        m += 1
    return out


def is_squarefree(p: Polynomial) -> bool:
    return poly_gcd(p, p.derivative()).degree < 1


def coprime_refine(polys: Sequence[Polynomial]) -> list:
    """Gcd-free basis of monic squarefree nonconstant inputs.

    Every input is a product of outputs; outputs are pairwise coprime.
    """
    basis: list = []
    for p in polys:
        if p.degree < 1 or p.lc != 1 or not is_squarefree(p):
            raise ValueError(f"coprime_refine needs monic squarefree nonconstant input, got {p}")
        rest = p
        refined = []
        for b in basis:
            g = poly_gcd(b, rest) if rest.degree > 0 else Polynomial.constant(1)
            if g.degree < 1:
                refined.append(b)
                continue
            refined.append(g)
            cofactor = b.exact_div(g)
            if cofactor.degree > 0:
                refined.append(cofactor)
            rest = rest.exact_div(g)
        if rest.degree > 0:
            refined.append(rest.monic())
        basis = refined
    return basis


class RationalFunction:
    """Reduced quotient num/den with monic den, so equality is structural."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if isinstance(num, RationalFunction) and den is None:
            self.num, self.den, self._hash = num.num, num.den, num._hash
            return
        num = num if isinstance(num, Polynomial) else Polynomial.constant(num)
        if den is None:
            den = Polynomial.constant(1)
        elif not isinstance(den, Polynomial):
            den = Polynomial.constant(den)
        if den.is_zero():
            raise DivideByZeroPolynomial("rational function with zero denominator")
        if num.is_zero():
            den = Polynomial.constant(1)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        lc = den.lc
        if lc != 1:
            num = num * (1 / lc)
            den = den.monic()
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _reduced(cls, num: Polynomial, den: Polynomial) -> RationalFunction:
        f = cls.__new__(cls)
        f.num, f.den, f._hash = num, den, None
        return f

    @classmethod
    def t(cls) -> RationalFunction:
        return cls(Polynomial.t())

    @classmethod
    def constant(cls, c) -> RationalFunction:
        return cls(Polynomial.constant(c))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree < 1 and self.den.degree < 1

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = _as_ratfunc(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RationalFunction", self.num, self.den))
        return self._hash

    def __add__(self, other):
        other = _as_ratfunc(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._reduced(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_ratfunc(other))

    def __rsub__(self, other):
        return _as_ratfunc(other) - self

    def __mul__(self, other):
        other = _as_ratfunc(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if other.is_zero():
            raise DivideByZeroPolynomial("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_ratfunc(other) / self

    def __pow__(self, e: int):
        if e >= 0:
            return RationalFunction._reduced(self.num ** e, self.den ** e) if e else RationalFunction.constant(1)
        if self.is_zero():
            raise DivideByZeroPolynomial("negative power of zero")
        return RationalFunction(self.den ** -e, self.num ** -e)

    def derivative(self) -> RationalFunction:
        """d/dt."""
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, value):
        dv = self.den(value)
        if not dv:
            raise DivideByZeroPolynomial(f"pole at t = {value}")
        return self.num(value) / dv

    def to_string(self, var: str = "t") -> str:
        if self.den.degree == 0:
            return self.num.to_string(var)
        return f"({self.num.to_string(var)})/({self.den.to_string(var)})"

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"RationalFunction({self.to_string()!r})"


def _as_ratfunc(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Polynomial):
        return RationalFunction(value)
    if isinstance(value, (int, Fraction, type(_ZERO))):
        return RationalFunction.constant(value)
    raise TypeError(f"cannot interpret {value!r} as a rational function")


def lcm_of_denominators(values) -> int:
    from math import lcm

    return reduce(lcm, (int(mpq(v).denominator) for v in values), 1)
