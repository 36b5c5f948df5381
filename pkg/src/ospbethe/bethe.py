"""Bethe tuples: genericity, Wronskian/divisibility verification and reproduction."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactalg import (
    ONE,
    Polynomial,
    RationalFunction,
    as_fraction,
    as_rf,
    log_derivative,
    poly_divrem,
    poly_gcd,
    rational_roots,
    solve_linear,
)
from .liedata import (
    CartanData,
    ExtParity,
    InvalidMove,
    WeightData,
    cartan_data,
    parity_step,
    rescaling_between,
    swap_last_two,
    table1_transform,
)


class NotGeneric(ValueError):
    pass


class NotAdmissible(ValueError):
    pass


class NoPolynomialSolution(ArithmeticError):
    """The first-order Wronskian equation has no polynomial solution."""


class NotFertile(ArithmeticError):
    pass


class ZeroDescendant(ArithmeticError):
    pass


def _monic_tuple(polys: Sequence) -> tuple:
    out = []
    for p in polys:
        if isinstance(p, (int, Fraction)):
            p = Polynomial.constant(p)
        elif not isinstance(p, Polynomial):
            p = Polynomial(p)
        if p.is_zero():
            raise ValueError("y entries must be nonzero")
        out.append(p.monic())
    return tuple(out)


@dataclass(frozen=True)
class BetheTuple:
    """Monic polynomials ``y`` together with the parity and weight data they live on."""

    y: tuple
    parity: ExtParity
    weights: WeightData
    data: CartanData = field(compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "y", _monic_tuple(self.y))
        if self.weights.parity is None:
            object.__setattr__(
                self, "weights", WeightData(self.weights.weights, self.weights.points, self.parity)
            )
        elif self.weights.parity != self.parity:
            raise ValueError("weights are given at a different parity")
        if self.data is None:
            object.__setattr__(self, "data", cartan_data(self.weights, self.parity))
        if len(self.y) != self.data.size:
            raise ValueError(f"expected {self.data.size} polynomials, got {len(self.y)}")

    @property
    def degrees(self) -> tuple:
        return tuple(p.degree for p in self.y)

    @property
    def key(self) -> tuple:
        return (self.parity.s, self.parity.kappa, tuple(p.coeffs for p in self.y))

    def to_json(self) -> dict:
        return {
            "y": [p.to_strings() for p in self.y],
            **self.parity.to_json(),
        }


def trivial_tuple(parity: ExtParity, weights: WeightData) -> BetheTuple:
    size = parity.algebra.num_roots
    return BetheTuple((ONE,) * size, parity, weights)


# -- genericity ----------------------------------------------------------------

@dataclass
class GenericityReport:
    multiple_roots: list = field(default_factory=list)
    common_roots: list = field(default_factory=list)
    pi_roots: list = field(default_factory=list)
    zero_entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.multiple_roots or self.common_roots or self.pi_roots or self.zero_entries)

    def __bool__(self):
        return self.ok


def is_generic(y: Sequence[Polynomial], cd: CartanData) -> GenericityReport:
    report = GenericityReport()
    pis = cd.pi
    for i, yi in enumerate(y):
        if yi.is_zero():
            report.zero_entries.append(i + 1)
            continue
        if cd.C[i][i] != 0 and poly_gcd(yi, yi.derivative()).degree > 0:
            report.multiple_roots.append(i + 1)
        if poly_gcd(yi, pis[i]).degree > 0:
            report.pi_roots.append(i + 1)
        for j in range(i + 1, len(y)):
            if cd.C[i][j] != 0 and not y[j].is_zero() and poly_gcd(yi, y[j]).degree > 0:
                report.common_roots.append((i + 1, j + 1))
    return report


# -- right-hand sides of the Wronskian/divisibility form --------------------------

def bosonic_rhs(y: Sequence[Polynomial], cd: CartanData, i: int) -> RationalFunction:
    """``T_i * prod_{j != i} y_j^(-c_ij)`` for a direction with ``c_ii = 2``."""
    idx = i - 1
    rhs = cd.T[idx].to_rational_function()
    for j, yj in enumerate(y):
        c = cd.C[idx][j]
        if j == idx or c == 0:
            continue
        if c.denominator != 1:
            raise NotAdmissible(f"row {i} has a non-integer entry {c}")
        rhs = rhs * as_rf(yj) ** int(-c)
    return rhs


def fermionic_rhs(y: Sequence[Polynomial], cd: CartanData, i: int) -> RationalFunction:
    """``ln'(T_i prod y_j^(-c_ij)) * pi_i * prod_{c_ij != 0} y_j``."""
    idx = i - 1
    log_part = log_derivative(cd.T[idx])
    prod = as_rf(cd.pi[idx])
    for j, yj in enumerate(y):
        c = cd.C[idx][j]
        if c == 0:
            continue
        log_part = log_part - log_derivative(yj) * c
        prod = prod * yj
    return log_part * prod


def solve_wronskian(y: Polynomial, rhs) -> Polynomial:
    """Canonical polynomial ``g`` with ``Wr(y, g) = rhs``.

    Solutions form ``g + c*y``; the representative returned has zero coefficient
    at degree ``deg y``.
    """
    rhs = as_rf(rhs)
    if not rhs.is_polynomial():
        raise NoPolynomialSolution("right-hand side is not a polynomial")
    target = rhs.as_polynomial()
    if target.is_zero():
        return Polynomial()
    top = target.degree + 1
    dy = y.degree
    ncols = top + 1
    # column k holds Wr(y, x^k) = k x^(k-1) y - x^k y'
    columns = []
    for k in range(ncols):
        xk = Polynomial.x() ** k
        columns.append(y * (xk.derivative()) - y.derivative() * xk)
    nrows = max(max((c.degree for c in columns), default=0), target.degree) + 1
    matrix = [[columns[k].coeff(row) for k in range(ncols)] for row in range(nrows)]
    rhs_vec = [target.coeff(row) for row in range(nrows)]
    solution = solve_linear(matrix, rhs_vec)
    if solution is None:
        raise NoPolynomialSolution(f"Wr({y}, g) = {target} has no polynomial solution g")
    g = Polynomial(solution)
    if dy <= g.degree:
        g = g - y * g.coeff(dy)
    return g


# -- verification ----------------------------------------------------------------

@dataclass
class DirectionResult:
    direction: int
    kind: str  # "bosonic" or "fermionic"
    ok: bool
    witness: Optional[Polynomial] = None
    reason: str = ""

    @property
    def fertile(self) -> bool:
        return self.ok and self.witness is not None and not self.witness.is_zero()

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "kind": self.kind,
            "ok": self.ok,
            "fertile": self.fertile,
            "witness": self.witness.to_strings() if self.witness is not None else None,
            "reason": self.reason,
        }


@dataclass
class BAEReport:
    directions: list

    @property
    def ok(self) -> bool:
        return all(d.ok for d in self.directions)

    @property
    def failing(self) -> list:
        return [d.direction for d in self.directions if not d.ok]

    @property
    def witnesses(self) -> list:
        return [d.witness for d in self.directions]

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "directions": [d.to_json() for d in self.directions]}


def _fermionic_quotient(y: Sequence[Polynomial], cd: CartanData, i: int) -> Polynomial:
    rhs = fermionic_rhs(y, cd, i)
    if not rhs.is_polynomial():
        raise NotFertile(f"direction {i}: right-hand side {rhs} is not a polynomial")
    q, r = poly_divrem(rhs.as_polynomial(), y[i - 1])
    if not r.is_zero():
        raise NotFertile(f"direction {i}: y_{i} does not divide the right-hand side")
    return q


def check_direction(y: Sequence[Polynomial], cd: CartanData, i: int) -> DirectionResult:
    idx = i - 1
    if cd.C[idx][idx] == 0:
        try:
            q = _fermionic_quotient(y, cd, i)
        except NotFertile as exc:
            return DirectionResult(i, "fermionic", False, reason=str(exc))
        return DirectionResult(i, "fermionic", True, q)
    try:
        g = solve_wronskian(y[idx], bosonic_rhs(y, cd, i))
    except NoPolynomialSolution as exc:
        return DirectionResult(i, "bosonic", False, reason=str(exc))
    return DirectionResult(i, "bosonic", True, g)


def verify_bae(y: Sequence[Polynomial], cd: CartanData, check_generic: bool = True) -> BAEReport:
    """Decide the Bethe ansatz equation through its Wronskian/divisibility form.

    A zero witness in a fermionic direction still satisfies the equation; such a
    direction is reported as not fertile.
    """
    if not cd.is_admissible():
        raise NotAdmissible("(C, T) is not admissible")
    if check_generic:
        report = is_generic(y, cd)
        if not report.ok:
            raise NotGeneric(f"tuple is not generic: {report}")
    return BAEReport([check_direction(y, cd, i) for i in range(1, cd.size + 1)])


def verify_tuple(t: BetheTuple) -> BAEReport:
    return verify_bae(t.y, t.data)


def direct_bae(y: Sequence[Polynomial], cd: CartanData) -> Optional[bool]:
    """Evaluate the vanishing conditions at every rational root of every ``y_i``.

    Returns ``None`` when some ``y_i`` does not split over the rationals.
    """
    logs = [log_derivative(p) for p in y]
    for idx, yi in enumerate(y):
        roots = rational_roots(yi)
        if sum(roots.values()) != yi.degree:
            return None
        if not roots:
            continue
        expr = -log_derivative(cd.T[idx])
        for j in range(len(y)):
            if j != idx and cd.C[idx][j] != 0:
                expr = expr + logs[j] * cd.C[idx][j]
        if cd.C[idx][idx] != 0:
            d1 = yi.derivative()
            expr = expr + RationalFunction(d1.derivative(), d1)
        for t in roots:
            if expr.den(t) == 0:
                raise NotGeneric(f"pole at root {t} of y_{idx + 1}")
            if expr(t) != 0:
                return False
    return True


# -- reproduction ----------------------------------------------------------------

def bosonic_step(t: BetheTuple, i: int) -> tuple:
    """Return ``(g, y_i)``: the family ``g + c*y_i`` of bosonic descendants."""
    if t.data.C[i - 1][i - 1] != 2:
        raise InvalidMove(f"direction {i} is not bosonic")
    g = solve_wronskian(t.y[i - 1], bosonic_rhs(t.y, t.data, i))
    return g, t.y[i - 1]


def fermionic_step(t: BetheTuple, i: int) -> Polynomial:
    if t.data.C[i - 1][i - 1] != 0:
        raise InvalidMove(f"direction {i} is not fermionic")
    q = _fermionic_quotient(t.y, t.data, i)
    if q.is_zero():
        raise ZeroDescendant(f"direction {i} produces the zero polynomial")
    return q.monic()


def _relabels(p: ExtParity, i: int) -> bool:
    return p.type_d and i == p.r and p.s[-2:] == (-1, 1)


def transformed_data(t: BetheTuple, i: int, new_parity: ExtParity, new_weights: WeightData) -> CartanData:
    """Table-driven data for the descendant, normalized to the Cartan matrix of the new parity."""
    table = table1_transform(t.data, i)
    canonical = cartan_data(new_weights, new_parity)
    compare = swap_last_two(canonical) if _relabels(t.parity, i) else canonical
    if rescaling_between(table, compare) is None:
        raise ArithmeticError(f"transformed data in direction {i} does not match {new_parity.label()}")
    return canonical


def reproduce(t: BetheTuple, move, c=0) -> BetheTuple:
    """Immediate descendant of ``t``; ``c`` selects a member of a bosonic family."""
    p = t.parity
    if move == "f":
        if not p.type_d:
            raise InvalidMove("the fake move exists only in type D")
        y = t.y[:-2] + (t.y[-1], t.y[-2])
        q = parity_step(p, "f")
        return BetheTuple(y, q, t.weights.step("f"))
    if move not in p.moves():
        raise InvalidMove(f"invalid move {move!r} at {p.label()}")
    i = int(move)
    idx = i - 1
    if t.data.C[idx][idx] == 2:
        g, yi = bosonic_step(t, i)
        new_yi = g + yi * as_fraction(c)
        y = t.y[:idx] + (new_yi,) + t.y[idx + 1 :]
        return BetheTuple(y, p, t.weights, t.data)
    new_yi = fermionic_step(t, i)
    q = parity_step(p, i)
    w = t.weights.step(i)
    if _relabels(p, i):
        y = t.y[:-2] + (new_yi, t.y[-2])
    else:
        y = t.y[:idx] + (new_yi,) + t.y[idx + 1 :]
    return BetheTuple(y, q, w, transformed_data(t, i, q, w))


def move_kind(t: BetheTuple, move) -> str:
    if move == "f":
        return "fake"
    return "bosonic" if t.data.C[int(move) - 1][int(move) - 1] == 2 else "fermionic"


__all__ = [
    "BetheTuple",
    "BAEReport",
    "DirectionResult",
    "GenericityReport",
    "NoPolynomialSolution",
    "NotAdmissible",
    "NotFertile",
    "NotGeneric",
    "ZeroDescendant",
    "bosonic_rhs",
    "bosonic_step",
    "check_direction",
    "direct_bae",
    "fermionic_rhs",
    "fermionic_step",
    "is_generic",
    "move_kind",
    "reproduce",
    "solve_wronskian",
    "transformed_data",
    "trivial_tuple",
    "verify_bae",
    "verify_tuple",
]
