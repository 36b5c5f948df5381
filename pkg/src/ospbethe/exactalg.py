"""Exact univariate arithmetic over the rationals.

Everything here is immutable and built on :class:`fractions.Fraction`.
Polynomials are stored as tuples of coefficients in ascending degree; the
zero polynomial has degree ``ZERO_DEGREE`` (-1), which keeps it apart from
the nonzero constants.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd, isqrt
from typing import Iterable, Mapping, Optional, Sequence, Union

try:  # optional accelerator for large products, divisions and gcds
    import flint
except ImportError:  # pragma: no cover
    flint = None

ZERO_DEGREE = -1


def _coprime_fraction(num: int, den: int) -> Fraction:
    # flint already hands back reduced pairs; skip Fraction's own gcd where allowed
    try:
        return Fraction(num, den, _normalize=False)
    except TypeError:
        return Fraction(num, den)
# degree above which the heavy operations go through flint
FLINT_THRESHOLD = 1

Scalar = Union[int, Fraction]


class NonRationalIntegral(ArithmeticError):
    """The antiderivative would need a logarithm."""


class NotALogDerivative(ArithmeticError):
    """No rational function has the given logarithmic derivative."""


class NotSplit(ArithmeticError):
    """A polynomial does not factor into linear factors over the rationals."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def _trim(coeffs: Iterable[Fraction]) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Polynomial:
    """Univariate polynomial with rational coefficients."""

    # Either ``_c`` (tuple of Fractions) or ``_fl`` (flint poly) is set; the
    # other side is filled in on demand.
    __slots__ = ("_c", "_hash", "_fl")

    def __init__(self, coeffs: Iterable = ()):
        self._c = _trim(as_fraction(c) for c in coeffs)
        self._hash = None
        self._fl = None

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Polynomial":
        p = object.__new__(cls)
        p._c = _trim(coeffs)
        p._hash = None
        p._fl = None
        return p

    @property
    def coeffs(self) -> tuple:
        if self._c is None:
            self._c = tuple(_coprime_fraction(int(c.p), int(c.q)) for c in self._fl.coeffs())
        return self._c

    def _flint(self):
        if self._fl is None:
            self._fl = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in self._c])
        return self._fl

    @classmethod
    def _from_flint(cls, f) -> "Polynomial":
        p = object.__new__(cls)
        p._c = None
        p._hash = None
        p._fl = f
        return p

    @classmethod
    def x(cls) -> "Polynomial":
        return cls._raw((Fraction(0), Fraction(1)))

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls._raw((as_fraction(c),))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar], lead: Scalar = 1) -> "Polynomial":
        p = cls.constant(lead)
        for z in roots:
            p = p * cls._raw((-as_fraction(z), Fraction(1)))
        return p

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "Polynomial":
        return cls(Fraction(s) for s in items)

    def to_strings(self) -> list:
        return [str(c) for c in self.coeffs]

    # basic queries -------------------------------------------------------
    @property
    def degree(self) -> int:
        if self._c is None:
            return self._fl.degree()
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return self.degree < 0

    def is_constant(self) -> bool:
        return self.degree <= 0

    @property
    def lc(self) -> Fraction:
        if self._c is None:
            d = self._fl.degree()
            if d < 0:
                return Fraction(0)
            c = self._fl[d]
            return _coprime_fraction(int(c.p), int(c.q))
        return self._c[-1] if self._c else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def monic(self) -> "Polynomial":
        if self._c is None:
            f = self._fl
            lead = f[f.degree()] if f.degree() >= 0 else 1
            return self if lead == 1 else Polynomial._from_flint(f / lead)
        if not self._c:
            return self
        lead = self._c[-1]
        if lead == 1:
            return self
        return Polynomial._raw(tuple(c / lead for c in self._c))

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self) -> "Polynomial":
        if self._c is None:
            return Polynomial._from_flint(self._fl.derivative())
        return Polynomial._raw(tuple(k * c for k, c in enumerate(self._c) if k))

    def scale(self, c: Scalar) -> "Polynomial":
        c = as_fraction(c)
        if c == 0:
            return ZERO
        if self._c is None:
            return Polynomial._from_flint(self._fl * flint.fmpq(c.numerator, c.denominator))
        return Polynomial._raw(tuple(c * a for a in self._c))

    def shift_degree(self, k: int) -> "Polynomial":
        if not self.coeffs:
            return self
        return Polynomial._raw((Fraction(0),) * k + self.coeffs)

    # ring operations -----------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial._raw((Fraction(other),))
        return NotImplemented

    def __add__(self, other):
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._c is None and other._c is None:
            return Polynomial._from_flint(self._fl + other._fl)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Polynomial._raw(tuple(out))

    __radd__ = __add__

    def __neg__(self):
        if self._c is None:
            return Polynomial._from_flint(-self._fl)
        return Polynomial._raw(tuple(-c for c in self._c))

    def __sub__(self, other):
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        if flint is not None and self.degree + other.degree + 2 > FLINT_THRESHOLD:
            return Polynomial._from_flint(self._flint() * other._flint())
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Polynomial._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_divrem(self, other)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        return RationalFunction(self, other)

    def __rtruediv__(self, other):
        return RationalFunction(other, self)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if self._c is None and other._c is None:
                return self._fl == other._fl
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial.constant(other).coeffs
        if isinstance(other, RationalFunction):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("poly", self.coeffs))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Polynomial({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def format_poly(p: Polynomial, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append((sign, body))
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


ZERO = Polynomial._raw(())
ONE = Polynomial._raw((Fraction(1),))
X = Polynomial.x()


def poly_divrem(a: Polynomial, b: Polynomial) -> tuple:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.degree < b.degree:
        return ZERO, a
    if flint is not None and a.degree > FLINT_THRESHOLD:
        q, r = divmod(a._flint(), b._flint())
        return Polynomial._from_flint(q), Polynomial._from_flint(r)
    rem = list(a.coeffs)
    db = b.degree
    inv = 1 / b.lc
    bc = b.coeffs
    quot = [Fraction(0)] * (a.degree - db + 1)
    for k in range(a.degree - db, -1, -1):
        c = rem[k + db] * inv
        if c:
            quot[k] = c
            for j in range(db):
                rem[k + j] -= c * bc[j]
        rem[k + db] = Fraction(0)
    return Polynomial._raw(tuple(quot)), Polynomial._raw(tuple(rem[:db]))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    if flint is not None and max(a.degree, b.degree) > FLINT_THRESHOLD and not a.is_zero() and not b.is_zero():
        return Polynomial._from_flint(a._flint().gcd(b._flint())).monic()
    while not b.is_zero():
        a, b = b, poly_divrem(a, b)[1].monic()
    return a.monic()


def poly_euclid(a: Polynomial, b: Polynomial) -> tuple:
    """Return ``(q, r, g)`` with ``a = q*b + r`` and ``g`` the monic gcd."""
    q, r = poly_divrem(a, b)
    return q, r, poly_gcd(a, b)


def poly_xgcd(a: Polynomial, b: Polynomial) -> tuple:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while not r1.is_zero():
        q, r = poly_divrem(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return ZERO, ZERO, ZERO
    lead = r0.lc
    return r0.scale(1 / lead), s0.scale(1 / lead), t0.scale(1 / lead)


def poly_exact_div(a: Polynomial, b: Polynomial) -> Polynomial:
    q, r = poly_divrem(a, b)
    if not r.is_zero():
        raise ArithmeticError(f"{b} does not divide {a}")
    return q


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return ZERO
    return (poly_exact_div(a, poly_gcd(a, b)) * b).monic()


def is_squarefree(p: Polynomial) -> bool:
    if p.is_zero():
        return False
    return poly_gcd(p, p.derivative()).degree == 0


def squarefree_decomposition(p: Polynomial) -> list:
    """Yun's algorithm: monic ``[a1, a2, ...]`` with ``p ~ a1 * a2**2 * ...``."""
    if p.degree <= 0:
        return []
    p = p.monic()
    dp = p.derivative()
    g = poly_gcd(p, dp)
    b = poly_exact_div(p, g)
    c = poly_exact_div(dp, g)
    d = c - b.derivative()
    factors = []
    while b.degree > 0:
        a = poly_gcd(b, d)
        factors.append(a)
        b = poly_exact_div(b, a)
        c = poly_exact_div(d, a)
        d = c - b.derivative()
    while factors and factors[-1].degree == 0:
        factors.pop()
    return factors


def _int_divisors(n: int) -> list:
    n = abs(n)
    if n == 0:
        return [0]
    primes = {}
    k, p = n, 2
    while p * p <= k:
        while k % p == 0:
            primes[p] = primes.get(p, 0) + 1
            k //= p
        p += 1 if p == 2 else 2
    if k > 1:
        primes[k] = primes.get(k, 0) + 1
    divs = [1]
    for p, e in primes.items():
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def _primitive_integer(p: Polynomial) -> list:
    den = reduce(lambda acc, c: acc * c.denominator // gcd(acc, c.denominator), p.coeffs, 1)
    ints = [int(c * den) for c in p.coeffs]
    g = reduce(gcd, ints, 0) or 1
    return [c // g for c in ints]


def rational_roots(p: Polynomial) -> dict:
    """All rational roots of ``p`` with multiplicities."""
    if p.is_zero():
        raise ValueError("the zero polynomial has every root")
    roots = {}
    p = p.monic()
    while p.degree > 0 and p.coeff(0) == 0:
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
        p = Polynomial._raw(p.coeffs[1:])
    if p.degree <= 0:
        return roots
    for factor_power, part in enumerate(squarefree_decomposition(p), start=1):
        rest = part
        if rest.degree == 0:
            continue
        ints = _primitive_integer(rest)
        for num, den in product(_int_divisors(ints[0]), _int_divisors(ints[-1])):
            if rest.degree == 0:
                break
            for z in (Fraction(num, den), Fraction(-num, den)):
                if rest.degree > 0 and rest(z) == 0:
                    roots[z] = roots.get(z, 0) + factor_power
                    rest = poly_divrem(rest, Polynomial._raw((-z, Fraction(1))))[0]
    return roots


class RationalFunction:
    """Quotient of polynomials in lowest terms with a monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=ZERO, den=ONE):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
        else:
            if den.degree > 0:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = poly_divrem(num, g)[0]
                    den = poly_divrem(den, g)[0]
            lead = den.lc
            if lead != 1:
                num = num.scale(1 / lead)
                den = den.scale(1 / lead)
            self.num, self.den = num, den
        self._hash = None

    @classmethod
    def _raw(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        f = object.__new__(cls)
        f.num, f.den, f._hash = num, den, None
        return f

    @classmethod
    def from_strings(cls, text: str) -> "RationalFunction":
        from .serialize import parse_rational_function

        return parse_rational_function(text)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeff(0)

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def __call__(self, value):
        d = self.den(value)
        if d == 0:
            raise ZeroDivisionError(f"pole at {value}")
        return self.num(value) / d

    def derivative(self) -> "RationalFunction":
        if self.den.degree == 0:
            return RationalFunction._raw(self.num.derivative(), ONE)
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    # field operations ----------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction._raw(other, ONE)
        if isinstance(other, (int, Fraction)):
            return RationalFunction._raw(Polynomial.constant(other), ONE)
        return NotImplemented

    def __add__(self, other):
        other = RationalFunction._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            if self.den.degree == 0:
                return RationalFunction._raw(self.num + other.num, ONE)
            return RationalFunction(self.num + other.num, self.den)
        if self.den.degree == 0:
            return RationalFunction._raw(self.num * other.den + other.num, other.den)
        if other.den.degree == 0:
            return RationalFunction._raw(self.num + other.num * self.den, self.den)
        g = poly_gcd(self.den, other.den)
        if g.degree == 0:
            return RationalFunction._raw(
                self.num * other.den + other.num * self.den, self.den * other.den
            )
        a = poly_divrem(self.den, g)[0]
        b = poly_divrem(other.den, g)[0]
        return RationalFunction(self.num * b + other.num * a, a * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        other = RationalFunction._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = RationalFunction._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RF_ZERO
            return RationalFunction._raw(self.num.scale(other), self.den)
        other = RationalFunction._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RF_ZERO
        if self.den.degree == 0 and other.den.degree == 0:
            return RationalFunction._raw(self.num * other.num, ONE)
        # cross-cancel before multiplying
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1 = poly_divrem(self.num, g1)[0] if g1.degree > 0 else self.num
        d2 = poly_divrem(other.den, g1)[0] if g1.degree > 0 else other.den
        n2 = poly_divrem(other.num, g2)[0] if g2.degree > 0 else other.num
        d1 = poly_divrem(self.den, g2)[0] if g2.degree > 0 else self.den
        num, den = n1 * n2, d1 * d2
        lead = den.lc
        if lead != 1:
            num, den = num.scale(1 / lead), den.scale(1 / lead)
        return RationalFunction._raw(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        lead = self.num.lc
        return RationalFunction._raw(self.den.scale(1 / lead), self.num.scale(1 / lead))

    def __truediv__(self, other):
        other = RationalFunction._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = RationalFunction._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction._raw(self.num**k, self.den**k)

    def __eq__(self, other):
        other = RationalFunction._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("rf", self.num.coeffs, self.den.coeffs))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def __str__(self):
        if self.den.degree == 0:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    def __repr__(self):
        return f"RationalFunction({self})"


RF_ZERO = RationalFunction._raw(ZERO, ONE)
RF_ONE = RationalFunction._raw(ONE, ONE)
RF_X = RationalFunction._raw(X, ONE)


def _as_poly(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return Polynomial.constant(value)
    raise TypeError(f"expected a polynomial, got {type(value).__name__}")


def as_rf(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, FactoredFunction):
        return value.to_rational_function()
    out = RationalFunction._coerce(value)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {type(value).__name__} to a rational function")
    return out


class FactoredFunction:
    """A scalar times a product of powers ``(x - z)**mu`` with rational data."""

    __slots__ = ("roots", "scalar")

    def __init__(self, roots: Mapping = None, scalar: Scalar = 1):
        cleaned = {}
        for z, mu in (roots or {}).items():
            mu = as_fraction(mu)
            if mu != 0:
                cleaned[as_fraction(z)] = mu
        self.roots = dict(sorted(cleaned.items()))
        self.scalar = as_fraction(scalar)
        if self.scalar == 0:
            raise ValueError("factored function with zero scalar")

    @classmethod
    def one(cls) -> "FactoredFunction":
        return cls({})

    @classmethod
    def from_pairs(cls, pairs: Iterable, scalar: Scalar = 1) -> "FactoredFunction":
        acc = {}
        for z, mu in pairs:
            z = as_fraction(z)
            acc[z] = acc.get(z, Fraction(0)) + as_fraction(mu)
        return cls(acc, scalar)

    @classmethod
    def from_rational_function(cls, f) -> "FactoredFunction":
        """Factor ``f`` over the rationals, raising :class:`NotSplit` otherwise."""
        f = as_rf(f)
        if f.is_zero():
            raise ValueError("cannot factor zero")
        roots = {}
        for poly, sign in ((f.num, 1), (f.den, -1)):
            found = rational_roots(poly) if poly.degree > 0 else {}
            if sum(found.values()) != poly.degree:
                raise NotSplit(f"{poly} has irrational roots")
            for z, k in found.items():
                roots[z] = roots.get(z, 0) + sign * k
        return cls(roots, f.num.lc)

    def pairs(self) -> list:
        return [[z, mu] for z, mu in self.roots.items()]

    def is_one(self) -> bool:
        return not self.roots and self.scalar == 1

    def has_integer_exponents(self) -> bool:
        return all(mu.denominator == 1 for mu in self.roots.values())

    def is_polynomial(self) -> bool:
        return all(mu.denominator == 1 and mu > 0 for mu in self.roots.values())

    def degree(self) -> Fraction:
        return sum(self.roots.values(), Fraction(0))

    def to_rational_function(self) -> RationalFunction:
        if not self.has_integer_exponents():
            raise ValueError(f"{self} has fractional exponents")
        num = Polynomial.from_roots(
            [z for z, mu in self.roots.items() for _ in range(int(mu)) if mu > 0], self.scalar
        )
        den = Polynomial.from_roots(
            [z for z, mu in self.roots.items() for _ in range(int(-mu)) if mu < 0]
        )
        return RationalFunction._raw(num, den)

    def to_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.to_rational_function().num

    def monic(self) -> "FactoredFunction":
        return FactoredFunction(self.roots, 1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FactoredFunction(self.roots, self.scalar * other)
        if not isinstance(other, FactoredFunction):
            return NotImplemented
        acc = dict(self.roots)
        for z, mu in other.roots.items():
            acc[z] = acc.get(z, Fraction(0)) + mu
        return FactoredFunction(acc, self.scalar * other.scalar)

    __rmul__ = __mul__

    def __pow__(self, k):
        k = as_fraction(k)
        if k.denominator != 1 and self.scalar != 1:
            raise ValueError("fractional power of a non-monic factored function")
        scalar = self.scalar ** int(k) if k.denominator == 1 else Fraction(1)
        return FactoredFunction({z: mu * k for z, mu in self.roots.items()}, scalar)

    def inverse(self) -> "FactoredFunction":
        return self ** -1

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FactoredFunction(self.roots, self.scalar / other)
        if not isinstance(other, FactoredFunction):
            return NotImplemented
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, FactoredFunction):
            return NotImplemented
        return self.roots == other.roots and self.scalar == other.scalar

    def __hash__(self):
        return hash((tuple(self.roots.items()), self.scalar))

    def __repr__(self):
        body = " ".join(f"(x-{z})^{mu}" for z, mu in self.roots.items()) or "1"
        return f"FactoredFunction({self.scalar} * {body})"


def wronskian(fs: Sequence) -> RationalFunction:
    """Determinant of the matrix of successive derivatives; ``Wr() = 1``."""
    fs = [as_rf(f) for f in fs]
    k = len(fs)
    if k == 0:
        return RF_ONE
    common = reduce(poly_lcm, (f.den for f in fs), ONE)
    polys = [f.num * poly_divrem(common, f.den)[0] for f in fs]
    det = poly_wronskian(polys)
    if common.degree == 0:
        return RationalFunction._raw(det, ONE) if not det.is_zero() else RF_ZERO
    return RationalFunction(det, common**k)


def poly_wronskian(polys: Sequence[Polynomial]) -> Polynomial:
    """Wronskian of polynomials via fraction-free (Bareiss) elimination."""
    k = len(polys)
    if k == 0:
        return ONE
    rows = []
    current = list(polys)
    for _ in range(k):
        rows.append(current)
        current = [p.derivative() for p in current]
    return poly_det(rows)


def poly_det(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = poly_divrem(m[i][j] * pivot - m[i][k] * m[k][j], prev)[0]
            m[i][k] = ZERO
        prev = pivot
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def rf_det(matrix: Sequence[Sequence]) -> RationalFunction:
    """Determinant of a square matrix of rational functions."""
    rows = [[as_rf(e) for e in row] for row in matrix]
    n = len(rows)
    if n == 0:
        return RF_ONE
    common = [reduce(poly_lcm, (e.den for e in row), ONE) for row in rows]
    polys = [[e.num * poly_divrem(c, e.den)[0] for e in row] for row, c in zip(rows, common)]
    scale = reduce(lambda a, b: a * b, common, ONE)
    return RationalFunction(poly_det(polys), scale)


def log_derivative(f) -> RationalFunction:
    """``f'/f`` for a rational or factored function."""
    if isinstance(f, FactoredFunction):
        acc = RF_ZERO
        for z, mu in f.roots.items():
            acc = acc + RationalFunction._raw(Polynomial.constant(mu), Polynomial._raw((-z, Fraction(1))))
        return acc
    f = as_rf(f)
    if f.is_zero():
        raise ZeroDivisionError("log derivative of zero")
    n, d = f.num, f.den
    return RationalFunction(n.derivative() * d - n * d.derivative(), n * d)


def pi_of(f: FactoredFunction) -> Polynomial:
    """Monic product of ``x - z`` over the roots of ``f`` with nonzero exponent."""
    return Polynomial.from_roots(z for z, mu in f.roots.items() if mu != 0)


def _integrate_polynomial(p: Polynomial) -> Polynomial:
    return Polynomial._raw((Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(p.coeffs)))


def _solve_bezout(a: Polynomial, b: Polynomial, c: Polynomial) -> tuple:
    """Solve ``s*a + t*b = c`` with ``deg s < deg b`` given ``gcd(a, b) = 1``."""
    g, s, t = poly_xgcd(a, b)
    if g.degree != 0:
        raise ArithmeticError("Bezout data not coprime")
    s, t = s * c, t * c
    if b.degree > 0:
        q, s = poly_divrem(s, b)
        t = t + q * a
    return s, t


def rational_antiderivative(f) -> RationalFunction:
    """Antiderivative with zero constant term in its polynomial part.

    Hermite reduction splits off the rational part; a nonzero remainder
    with squarefree denominator means a logarithm is needed.
    """
    f = as_rf(f)
    poly_part, proper = poly_divrem(f.num, f.den)
    result = RationalFunction._raw(_integrate_polynomial(poly_part), ONE)
    if proper.is_zero():
        return result
    a, d = proper, f.den
    dm = poly_gcd(d, d.derivative())
    ds = poly_exact_div(d, dm)
    while dm.degree > 0:
        dm2 = poly_gcd(dm, dm.derivative())
        dms = poly_exact_div(dm, dm2)
        coeff = -poly_exact_div(ds * dm.derivative(), dm)
        b, c = _solve_bezout(coeff, dms, a)
        a = c - poly_exact_div(b.derivative() * ds, dms)
        result = result + RationalFunction(b, dm)
        dm = dm2
    if not a.is_zero():
        q, r = poly_divrem(a, ds)
        if not r.is_zero():
            raise NonRationalIntegral(f"integral of {f} has a logarithmic part")
        result = result + RationalFunction._raw(_integrate_polynomial(q), ONE)
    # zero-normalize the constant term of the polynomial part
    pq, pr = poly_divrem(result.num, result.den)
    shift = pq.coeff(0)
    if shift:
        result = result - shift
    return result


def _char_poly(matrix: list) -> Polynomial:
    """Characteristic polynomial ``det(t*I - M)`` by Faddeev-LeVerrier."""
    n = len(matrix)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A*M_{k-1} + c_{n-k+1} I
        prev = [[mk[i][j] + coeffs[n - k + 1] * ident[i][j] for j in range(n)] for i in range(n)]
        mk = [[sum(matrix[i][l] * prev[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(mk[i][i] for i in range(n)) / k
    return Polynomial(coeffs)


def _residue_values(num: Polynomial, den: Polynomial) -> Polynomial:
    """Characteristic polynomial of the residues of ``num/den`` (squarefree den)."""
    _, s, _ = poly_xgcd(den.derivative(), den)
    res = poly_divrem(num * s, den)[1]
    n = den.degree
    basis_images = []
    for k in range(n):
        img = poly_divrem(res * Polynomial._raw((Fraction(0),) * k + (Fraction(1),)), den)[1]
        basis_images.append([img.coeff(i) for i in range(n)])
    matrix = [[basis_images[j][i] for j in range(n)] for i in range(n)]
    return _char_poly(matrix)


def _exp_log_parts(a) -> list:
    """Return ``[(poly, exponent), ...]`` with ``ln'(prod poly**exponent) = a``."""
    a = as_rf(a)
    if a.is_zero():
        return []
    if a.is_polynomial():
        raise NotALogDerivative(f"{a} has a polynomial part")
    q, r = poly_divrem(a.num, a.den)
    if not q.is_zero():
        raise NotALogDerivative(f"{a} has a polynomial part")
    d = a.den
    if not is_squarefree(d):
        raise NotALogDerivative(f"{a} has a pole of order > 1")
    charp = _residue_values(r, d)
    values = rational_roots(charp)
    if sum(values.values()) != d.degree or any(v.denominator != 1 for v in values):
        raise NotALogDerivative(f"{a} has non-integer residues")
    parts = []
    dd = d.derivative()
    for c in sorted(values):
        g = poly_gcd(r - dd.scale(c), d)
        if g.degree > 0:
            parts.append((g, int(c)))
    return parts


def exp_log_integral(a) -> RationalFunction:
    """A monic-normalized rational ``g`` with ``g'/g = a`` (no splitting needed)."""
    num, den = ONE, ONE
    for poly, e in _exp_log_parts(a):
        if e > 0:
            num = num * poly**e
        elif e < 0:
            den = den * poly ** (-e)
    return RationalFunction(num, den)


def exp_log_integrate(a) -> FactoredFunction:
    """Invert :func:`log_derivative`; raises :class:`NotSplit` on irrational roots."""
    acc = {}
    for poly, e in _exp_log_parts(a):
        found = rational_roots(poly)
        if sum(found.values()) != poly.degree:
            raise NotSplit(f"{poly} does not split over the rationals")
        for z in found:
            acc[z] = acc.get(z, 0) + e
    return FactoredFunction(acc, 1)


def integer_nth_root(value: Fraction, n: int) -> Fraction:
    """Exact rational ``n``-th root, or ``ValueError`` if there is none."""
    value = as_fraction(value)
    if n == 1:
        return value
    sign = 1
    if value < 0:
        if n % 2 == 0:
            raise ValueError("even root of a negative number")
        sign, value = -1, -value

    def iroot(k: int) -> int:
        if k < 2:
            return k
        if n == 2:
            return isqrt(k)
        lo, hi = 0, 1 << (k.bit_length() // n + 1)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid**n <= k:
                lo = mid
            else:
                hi = mid - 1
        return lo

    p, q = iroot(value.numerator), iroot(value.denominator)
    if p**n != value.numerator or q**n != value.denominator:
        raise ValueError(f"{value} has no rational {n}-th root")
    return sign * Fraction(p, q)


# -- linear algebra over the rationals --------------------------------------

def rref(matrix: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    rows = [[as_fraction(v) for v in row] for row in matrix]
    pivots = []
    if not rows:
        return rows, pivots
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pivot = next((k for k in range(r, len(rows)) if rows[k][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col] != 0:
                factor = rows[k][col]
                rows[k] = [a - factor * b for a, b in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def matrix_rank(matrix: Sequence[Sequence]) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix: Sequence[Sequence], ncols: Optional[int] = None) -> list:
    """Basis of ``{v : matrix v = 0}``."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    rows, pivots = rref(matrix) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[list]:
    """One solution of ``matrix v = rhs`` (free variables set to zero), or ``None``."""
    ncols = len(matrix[0]) if matrix else 0
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(augmented)
    if ncols in pivots:
        return None
    v = [Fraction(0)] * ncols
    for row, p in zip(rows, pivots):
        v[p] = row[-1]
    return v
