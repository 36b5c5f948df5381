"""Differential operators over Q(x) and their right fractions.

A :class:`DiffOp` is ``sum a_j * d**j`` with rational-function coefficients
and the commutation rule ``d * a = a * d + a'``.  A :class:`RatPDO` is a
right fraction ``num * den**-1`` in the skew field of fractions, optionally
remembering the factor chain it was built from.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Sequence

from .exactalg import (
    RF_ONE,
    RF_ZERO,
    RationalFunction,
    as_rf,
    log_derivative,
)


class DegenerateSwitch(ArithmeticError):
    """Switching ``(d - a)(d - b)**-1`` is undefined when ``a == b``."""


def _derivatives(a: RationalFunction, count: int) -> list:
    out = [a]
    for _ in range(count):
        out.append(out[-1].derivative())
    return out


class DiffOp:
    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rf(a) for a in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.coeffs = tuple(c)
        self._hash = None

    @classmethod
    def d(cls) -> "DiffOp":
        return cls([RF_ZERO, RF_ONE])

    @classmethod
    def scalar(cls, a) -> "DiffOp":
        return cls([a])

    @classmethod
    def linear(cls, a) -> "DiffOp":
        """The first-order operator ``d - a``."""
        return cls([-as_rf(a), RF_ONE])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> RationalFunction:
        return self.coeffs[-1] if self.coeffs else RF_ZERO

    def coeff(self, k: int) -> RationalFunction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else RF_ZERO

    def monic(self) -> "DiffOp":
        if not self.coeffs:
            return self
        inv = self.lc.inverse()
        return DiffOp(c * inv for c in self.coeffs)

    def left_scale(self, f) -> "DiffOp":
        f = as_rf(f)
        return DiffOp(f * c for c in self.coeffs)

    def apply(self, f) -> RationalFunction:
        """Act on a rational function."""
        f = as_rf(f)
        acc = RF_ZERO
        for c in self.coeffs:
            if not c.is_zero():
                acc = acc + c * f
            f = f.derivative()
        return acc

    def __add__(self, other):
        other = _as_op(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return DiffOp(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_op(other))

    def __rsub__(self, other):
        return _as_op(other) + (-self)

    def __mul__(self, other):
        return diffop_mul(self, _as_op(other))

    def __rmul__(self, other):
        return diffop_mul(_as_op(other), self)

    def __pow__(self, k: int):
        out = ONE_OP
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            try:
                other = _as_op(other)
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        if not self.coeffs:
            return "DiffOp(0)"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("d" if k == 1 else f"d^{k}")
            parts.append(f"({c}){'*' + mono if mono else ''}")
        return "DiffOp(" + " + ".join(reversed(parts)) + ")"

    def to_strings(self) -> list:
        return [str(c) for c in self.coeffs]


def _as_op(value) -> DiffOp:
    if isinstance(value, DiffOp):
        return value
    return DiffOp([as_rf(value)])


ZERO_OP = DiffOp()
ONE_OP = DiffOp([RF_ONE])
D = DiffOp.d()


def diffop_mul(a: DiffOp, b: DiffOp) -> DiffOp:
    """Product in the Ore algebra, expanding ``d**i * f`` by Leibniz."""
    if a.is_zero() or b.is_zero():
        return ZERO_OP
    out = [RF_ZERO] * (a.order + b.order + 1)
    max_i = a.order
    derived = [_derivatives(bj, max_i) for bj in b.coeffs]
    for i, ai in enumerate(a.coeffs):
        if ai.is_zero():
            continue
        for j, bder in enumerate(derived):
            for k in range(i + 1):
                term = bder[k]
                if term.is_zero():
                    continue
                out[i - k + j] = out[i - k + j] + ai * term * comb(i, k)
    return DiffOp(out)


def diffop_adjoint(a: DiffOp) -> DiffOp:
    """Formal adjoint ``sum (-d)**j a_j`` written back in coefficient form."""
    if a.is_zero():
        return a
    out = [RF_ZERO] * (a.order + 1)
    for j, aj in enumerate(a.coeffs):
        if aj.is_zero():
            continue
        ders = _derivatives(aj, j)
        sign = -1 if j % 2 else 1
        for k in range(j + 1):
            if not ders[k].is_zero():
                out[j - k] = out[j - k] + ders[k] * (sign * comb(j, k))
    return DiffOp(out)


def diffop_divrem(a: DiffOp, b: DiffOp, side: str = "right") -> tuple:
    """Euclidean division.

    ``side="right"`` gives ``a = q*b + r``; ``side="left"`` gives ``a = b*q + r``.
    In both cases ``ord r < ord b``.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero operator")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    q = ZERO_OP
    r = a
    lead_inv = b.lc.inverse()
    while not r.is_zero() and r.order >= b.order:
        shift = r.order - b.order
        if side == "right":
            c = r.lc * lead_inv
            term = DiffOp([RF_ZERO] * shift + [c])
            r = r - term * b
        else:
            # b * (c d^shift) has leading coefficient lc(b) * c
            c = lead_inv * r.lc
            term = DiffOp([RF_ZERO] * shift + [c])
            r = r - b * term
        q = q + term
    return q, r


def _extended(a: DiffOp, b: DiffOp, side: str) -> tuple:
    """Extended Euclid; returns ``(g, u, v)`` where the last cofactors kill a and b.

    For ``side="right"``: ``u*a + v*b = 0`` with ``u*a`` the lclm.
    For ``side="left"``: ``a*u + b*v = 0`` with ``a*u`` the lcrm.
    """
    r0, r1 = a, b
    u0, u1 = ONE_OP, ZERO_OP
    v0, v1 = ZERO_OP, ONE_OP
    while not r1.is_zero():
        q, r = diffop_divrem(r0, r1, side)
        r0, r1 = r1, r
        if side == "right":
            u0, u1 = u1, u0 - q * u1
            v0, v1 = v1, v0 - q * v1
        else:
            u0, u1 = u1, u0 - u1 * q
            v0, v1 = v1, v0 - v1 * q
    return r0, u1, v1


def ore_common(a: DiffOp, b: DiffOp, kind: str = "gcrd") -> DiffOp:
    """Monic gcrd/lclm (right-divisor side) or gcld/lcrm (left-divisor side)."""
    if a.is_zero() or b.is_zero():
        raise ZeroDivisionError("common divisor/multiple of the zero operator")
    if kind == "gcrd":
        return _extended(a, b, "right")[0].monic()
    if kind == "gcld":
        return _extended(a, b, "left")[0].monic()
    if kind == "lclm":
        _, u, _ = _extended(a, b, "right")
        return (u * a).monic()
    if kind == "lcrm":
        _, u, _ = _extended(a, b, "left")
        return (a * u).monic()
    raise ValueError(f"unknown kind {kind!r}")


def lcrm_cofactors(a: DiffOp, b: DiffOp) -> tuple:
    """Return ``(x, y)`` with ``a*x = b*y`` a least common right multiple."""
    _, u, v = _extended(a, b, "left")
    return u, -v


class RatPDO:
    """Right fraction ``num * den**-1``; ``den`` is kept monic."""

    __slots__ = ("num", "den", "chain")

    def __init__(self, num: DiffOp, den: DiffOp = ONE_OP, chain: Optional[Sequence] = None):
        if den.is_zero():
            raise ZeroDivisionError("fraction with zero denominator")
        lead = den.lc
        if lead != RF_ONE:
            inv = _as_op(lead.inverse())
            num, den = num * inv, den * inv
        self.num = num
        self.den = den
        self.chain = tuple((as_rf(f), int(s)) for f, s in chain) if chain is not None else None

    @classmethod
    def from_op(cls, op: DiffOp) -> "RatPDO":
        return cls(op, ONE_OP)

    @classmethod
    def from_chain(cls, factors: Sequence) -> "RatPDO":
        """Fold ``prod (d - f_i)**s_i`` left to right."""
        result = ONE_FRAC
        factors = [(as_rf(f), int(s)) for f, s in factors]
        # runs of equal sign collapse into one operator before the Ore folding
        k = 0
        while k < len(factors):
            sign, block = factors[k][1], ONE_OP
            while k < len(factors) and factors[k][1] == sign:
                lin = DiffOp.linear(factors[k][0])
                block = block * lin if sign == 1 else lin * block
                k += 1
            step = RatPDO(block) if sign == 1 else RatPDO(ONE_OP, block)
            result = frac_mul(result, step)
        return cls(result.num, result.den, factors)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def reduced(self) -> "RatPDO":
        if self.num.is_zero():
            return RatPDO(ZERO_OP, ONE_OP, self.chain)
        g = ore_common(self.num, self.den, "gcrd")
        if g.order == 0:
            return self
        num = diffop_divrem(self.num, g, "right")
        den = diffop_divrem(self.den, g, "right")
        assert num[1].is_zero() and den[1].is_zero()
        return RatPDO(num[0], den[0], self.chain)

    def is_minimal(self) -> bool:
        return self.num.is_zero() or ore_common(self.num, self.den, "gcrd").order == 0

    def __mul__(self, other):
        return frac_mul(self, other)

    def __repr__(self):
        return f"RatPDO(num={self.num!r}, den={self.den!r})"


ONE_FRAC = RatPDO(ONE_OP, ONE_OP)


def left_to_right(den: DiffOp, num: DiffOp) -> RatPDO:
    """Rewrite the left fraction ``den**-1 * num`` as a right fraction."""
    if den.is_zero():
        raise ZeroDivisionError("inverse of the zero operator")
    if num.is_zero():
        return RatPDO(ZERO_OP, ONE_OP)
    if den.order == 0:
        return RatPDO(_as_op(den.lc.inverse()) * num, ONE_OP)
    # den * x = num * y  =>  den**-1 * num = x * y**-1
    x, y = lcrm_cofactors(den, num)
    return RatPDO(x, y).reduced()


def frac_mul(a: RatPDO, b: RatPDO) -> RatPDO:
    if a.is_zero() or b.is_zero():
        return RatPDO(ZERO_OP, ONE_OP)
    if a.den == ONE_OP:
        return RatPDO(a.num * b.num, b.den).reduced()
    if b.num == ONE_OP:
        return RatPDO(a.num, b.den * a.den).reduced()
    middle = left_to_right(a.den, b.num)
    return RatPDO(a.num * middle.num, b.den * middle.den).reduced()


def frac_inverse(a: RatPDO) -> RatPDO:
    if a.is_zero():
        raise ZeroDivisionError("inverse of the zero fraction")
    return RatPDO(a.den, a.num).reduced()


def frac_adjoint(a: RatPDO) -> RatPDO:
    """``(num * den**-1)* = (den*)**-1 * num*`` rewritten as a right fraction."""
    chain = None
    if a.chain is not None:
        chain = [(-f, s) for f, s in reversed(a.chain)]
    out = left_to_right(diffop_adjoint(a.den), diffop_adjoint(a.num))
    return RatPDO(out.num, out.den, chain)


def _common_numerators(a: RatPDO, b: RatPDO) -> tuple:
    if a.den == b.den:
        return a.num, b.num
    x, y = lcrm_cofactors(a.den, b.den)
    return a.num * x, b.num * y


def frac_ratio(a: RatPDO, b: RatPDO) -> Optional[Fraction]:
    """Scalar ``c`` with ``a = c * b``, or ``None`` if there is none."""
    if b.is_zero():
        return Fraction(0) if a.is_zero() else None
    if a.is_zero():
        return None
    na, nb = _common_numerators(a, b)
    if na.order != nb.order:
        return None
    ratio = na.lc / nb.lc
    if not ratio.is_constant():
        return None
    c = ratio.constant_value()
    if na == nb.left_scale(c):
        return c
    return None


def frac_equal(a: RatPDO, b: RatPDO) -> bool:
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    na, nb = _common_numerators(a, b)
    return na == nb


def symmetry_sign(a: RatPDO) -> Optional[Fraction]:
    """Scalar ``c`` with ``a* = c * a``, or ``None`` if ``a`` is not symmetric."""
    return frac_ratio(frac_adjoint(a), a)


def switch_factors(a, b, pattern: str = "numfirst") -> tuple:
    """Exchange the order of a numerator and a denominator factor.

    ``numfirst``: ``(d-a)(d-b)**-1 = (d-c)**-1 (d-e)`` returns ``(c, e)``.
    ``denfirst``: the inverse map, taking ``(c, e)`` back to ``(a, b)``.
    """
    a, b = as_rf(a), as_rf(b)
    if pattern == "numfirst":
        diff = a - b
        if diff.is_zero():
            raise DegenerateSwitch("equal factors cannot be switched")
        shift = log_derivative(diff)
        return b + shift, a + shift
    if pattern == "denfirst":
        c, e = a, b
        diff = c - e
        if diff.is_zero():
            raise DegenerateSwitch("equal factors cannot be switched")
        shift = log_derivative(diff)
        return e - shift, c - shift
    raise ValueError(f"unknown pattern {pattern!r}")


def chain_to_json(chain: Sequence) -> list:
    return [[str(f), int(s)] for f, s in chain]


def frac_to_json(a: RatPDO) -> dict:
    out = {"num": a.num.to_strings(), "den": a.den.to_strings()}
    if a.chain is not None:
        out["chain"] = chain_to_json(a.chain)
    return out
