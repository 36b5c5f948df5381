"""Superkernels, self-dual spaces, canonical forms and flag/factorization maps.

Every subspace lives inside a fixed spanning list of rational functions and
is handled through exact coordinate vectors, so equality, orthogonality and
intersections reduce to rank computations over the rationals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Optional, Sequence

from .exactalg import (
    ONE,
    RF_ONE,
    RF_ZERO,
    NonRationalIntegral,
    NotALogDerivative,
    Polynomial,
    RationalFunction,
    as_rf,
    exp_log_integral,
    integer_nth_root,
    log_derivative,
    nullspace,
    poly_divrem,
    poly_lcm,
    rational_antiderivative,
    rf_det,
    rref,
    solve_linear,
    wronskian,
)
from .orepdo import (
    ONE_OP,
    DiffOp,
    RatPDO,
    chain_to_json,
    diffop_divrem,
    frac_equal,
    frac_ratio,
    left_to_right,
    ore_common,
    switch_factors,
)


class DependentBasis(ValueError):
    pass


class NonRationalKernel(ArithmeticError):
    """A kernel needs functions outside the rational functions."""


class NotSelfDual(ValueError):
    pass


class ChainNotFactorization(ValueError):
    pass


class NoRationalWitt(ArithmeticError):
    """No isotropic vector was found over the rationals."""


# -- coordinates ---------------------------------------------------------------------

def _numerator_rows(funcs: Sequence) -> tuple:
    """Coefficient rows of the numerators over a common denominator."""
    funcs = [as_rf(f) for f in funcs]
    den = reduce(poly_lcm, (f.den for f in funcs), ONE)
    nums = [f.num * poly_divrem(den, f.den)[0] for f in funcs]
    width = max((p.degree + 1 for p in nums), default=0)
    return den, [[p.coeff(k) for k in range(width)] for p in nums]


def span_rank(funcs: Sequence) -> int:
    if not funcs:
        return 0
    _, rows = _numerator_rows(funcs)
    return len(rref(rows)[1])


def coordinates(f, basis: Sequence) -> Optional[list]:
    """Coefficients of ``f`` in ``basis`` or ``None`` when ``f`` is outside the span."""
    if not basis:
        return [] if as_rf(f).is_zero() else None
    _, rows = _numerator_rows(list(basis) + [f])
    target = rows[-1]
    columns = [[rows[j][k] for j in range(len(basis))] for k in range(len(target))]
    return solve_linear(columns, target)


def combine(coeffs: Sequence, basis: Sequence) -> RationalFunction:
    acc = RF_ZERO
    for c, f in zip(coeffs, basis):
        if c:
            acc = acc + as_rf(f) * c
    return acc


def _monic_rf(f) -> RationalFunction:
    f = as_rf(f)
    if f.is_zero():
        return f
    return RationalFunction(f.num.monic(), f.den.monic())


def _lead_scalar(f: RationalFunction) -> Fraction:
    return f.num.lc / f.den.lc


def canonical_basis(funcs: Sequence) -> tuple:
    """Reduced-echelon basis of the span, scaled so prefix Wronskians are monic."""
    funcs = [as_rf(f) for f in funcs]
    if not funcs:
        return ()
    den, rows = _numerator_rows(funcs)
    reduced, pivots = rref(rows)
    if len(pivots) != len(funcs):
        raise DependentBasis("basis functions are linearly dependent")
    basis = [RationalFunction(Polynomial(row), den) for row in reduced[: len(pivots)]]
    # highest pivot first keeps low-order functions at the end of prefixes
    basis.reverse()
    scaled, running = [], Fraction(1)
    for k, f in enumerate(basis):
        lead = _lead_scalar(wronskian(scaled + [f]))
        c = 1 / (lead / running)
        scaled.append(f * c)
        running = _lead_scalar(wronskian(scaled))
    return tuple(scaled)


@dataclass(frozen=True)
class FunctionSpace:
    basis: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(as_rf(f) for f in self.basis))
        if self.basis and wronskian(self.basis).is_zero():
            raise DependentBasis("zero Wronskian")

    @classmethod
    def canonical(cls, funcs: Sequence) -> "FunctionSpace":
        return cls(canonical_basis(funcs))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def wronskian(self) -> RationalFunction:
        return wronskian(self.basis)

    def monic_wronskian(self) -> RationalFunction:
        return _monic_rf(self.wronskian())

    def contains(self, f) -> bool:
        return coordinates(f, self.basis) is not None

    def same_span(self, other: "FunctionSpace") -> bool:
        if self.dim != other.dim:
            return False
        return span_rank(list(self.basis) + list(other.basis)) == self.dim

    def scaled(self, f) -> "FunctionSpace":
        f = as_rf(f)
        return FunctionSpace(tuple(b * f for b in self.basis))

    def to_json(self) -> list:
        return [str(f) for f in self.basis]


# -- operators from bases --------------------------------------------------------------

def _derivative_table(funcs: Sequence, depth: int) -> list:
    table = []
    for f in funcs:
        row = [as_rf(f)]
        for _ in range(depth):
            row.append(row[-1].derivative())
        table.append(row)
    return table


def diffop_from_basis(space) -> DiffOp:
    """Monic operator annihilating exactly the span, by row-determinant expansion."""
    basis = space.basis if isinstance(space, FunctionSpace) else tuple(space)
    n = len(basis)
    if n == 0:
        return ONE_OP
    table = _derivative_table(basis, n)
    wr = rf_det([[table[j][i] for j in range(n)] for i in range(n)])
    if wr.is_zero():
        raise DependentBasis("zero Wronskian")
    coeffs = []
    for k in range(n + 1):
        cols = [c for c in range(n + 1) if c != k]
        minor = rf_det([[table[j][c] for c in cols] for j in range(n)])
        sign = -1 if (n + k) % 2 else 1
        coeffs.append(minor * sign / wr)
    return DiffOp(coeffs)


def dual_space(space: FunctionSpace) -> FunctionSpace:
    """Basis of the kernel of the adjoint operator from hatted Wronskians."""
    b = list(space.basis)
    wr = wronskian(b)
    return FunctionSpace(tuple(wronskian(b[:i] + b[i + 1:]) / wr for i in range(len(b))))


def kernel_of_chain(factors: Sequence) -> list:
    """Rational basis of ker (d - a_1)...(d - a_k)."""
    basis: list = []
    for a in factors:
        try:
            g = exp_log_integral(a)
            lifted = [g * rational_antiderivative(h / g) for h in basis]
        except (NotALogDerivative, NonRationalIntegral) as exc:
            raise NonRationalKernel(str(exc)) from exc
        basis = [g] + lifted
    return basis


def separate_chain(chain: Sequence) -> tuple:
    """Move every numerator factor to the left of every denominator factor.

    Returns ``(plus, minus)`` with ``R = prod(d - a) * (prod(d - b))**-1``;
    equal adjacent pairs ``(d - c)**-1 (d - c)`` cancel.
    """
    work = [(as_rf(f), int(s)) for f, s in chain]
    changed = True
    while changed:
        changed = False
        for k in range(len(work) - 1):
            (c, s1), (e, s2) = work[k], work[k + 1]
            if s1 == -1 and s2 == 1:
                if c == e:
                    del work[k : k + 2]
                else:
                    a, b = switch_factors(c, e, "denfirst")
                    work[k : k + 2] = [(a, 1), (b, -1)]
                changed = True
                break
    plus = [f for f, s in work if s == 1]
    minus = [f for f, s in work if s == -1]
    return plus, minus


def _product(factors: Sequence) -> DiffOp:
    out = ONE_OP
    for a in factors:
        out = out * DiffOp.linear(a)
    return out


def _image_space(op: DiffOp, funcs: Sequence) -> list:
    images = [op.apply(f) for f in funcs]
    images = [g for g in images if not g.is_zero()]
    if not images:
        return []
    den, rows = _numerator_rows(images)
    reduced, pivots = rref(rows)
    return [RationalFunction(Polynomial(row), den) for row in reduced[: len(pivots)]]


# -- superspaces ---------------------------------------------------------------------

@dataclass
class SuperSpace:
    V: FunctionSpace
    U: FunctionSpace
    operator: Optional[RatPDO] = None
    _gram: Optional[list] = field(default=None, repr=False)

    def __post_init__(self):
        if span_rank(self.basis) != len(self.basis):
            raise DependentBasis("V and U intersect")

    @property
    def dims(self) -> tuple:
        return self.V.dim, self.U.dim

    @property
    def basis(self) -> tuple:
        return self.V.basis + self.U.basis

    @property
    def dim(self) -> int:
        return self.V.dim + self.U.dim

    def whole(self) -> FunctionSpace:
        return FunctionSpace(self.basis)

    def coords(self, f) -> list:
        c = coordinates(f, self.basis)
        if c is None:
            raise ValueError(f"{f} is not in the superspace")
        return c

    def gram(self) -> list:
        if self._gram is None:
            self._gram = canonical_form(self.whole())[0]
        return self._gram

    def to_json(self) -> dict:
        out = {"V": self.V.to_json(), "U": self.U.to_json(), "dims": list(self.dims)}
        if self.operator is not None:
            out["D0"] = self.operator.num.to_strings()
            out["D1"] = self.operator.den.to_strings()
        return out

    @classmethod
    def from_json(cls, data) -> "SuperSpace":
        V = FunctionSpace(tuple(RationalFunction.from_strings(t) for t in data["V"]))
        U = FunctionSpace(tuple(RationalFunction.from_strings(t) for t in data["U"]))
        return cls(V, U)


def superkernel(r: RatPDO) -> SuperSpace:
    """Even and odd kernels of the minimal fraction of a chained operator."""
    if r.chain is None:
        raise ValueError("the operator carries no factor chain")
    plus, minus = separate_chain(r.chain)
    D0p = _product(plus)
    D1p = _product(list(reversed(minus)))
    V0 = kernel_of_chain(plus)
    U0 = kernel_of_chain(list(reversed(minus)))
    g = ore_common(D0p, D1p, "gcrd").monic() if minus else ONE_OP
    if g.order > 0:
        D0 = diffop_divrem(D0p, g, "right")[0]
        D1 = diffop_divrem(D1p, g, "right")[0]
        V0, U0 = _image_space(g, V0), _image_space(g, U0)
    else:
        D0, D1 = D0p, D1p
    if len(V0) != D0.order or len(U0) != D1.order:
        raise NonRationalKernel("kernel dimension does not match the operator order")
    minimal = RatPDO(D0, D1, r.chain)
    return SuperSpace(FunctionSpace.canonical(V0), FunctionSpace.canonical(U0), minimal)


# -- canonical bilinear form -----------------------------------------------------------

def _constant_wronskian(basis: Sequence) -> Fraction:
    wr = wronskian(basis)
    if wr.is_zero() or not wr.is_constant():
        raise NotSelfDual(f"Wronskian {wr} is not a nonzero constant")
    return wr.constant_value()


def _inverse(matrix: list) -> list:
    n = len(matrix)
    augmented = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    rows, pivots = rref(augmented)
    if pivots[:n] != list(range(n)):
        raise NotSelfDual("hatted Wronskians are dependent")
    return [row[n:] for row in rows]


def canonical_form(space) -> tuple:
    """Gram matrix of the canonical form on the stored basis, and ``Wr(basis)``."""
    basis = list(space.basis if isinstance(space, FunctionSpace) else space)
    n = len(basis)
    if n == 0:
        return [], Fraction(1)
    wr = _constant_wronskian(basis)
    C = []
    for i in range(n):
        hat = wronskian(basis[:i] + basis[i + 1:])
        c = coordinates(hat, basis)
        if c is None:
            raise NotSelfDual(f"hatted Wronskian {hat} is outside the space")
        C.append(c)
    A = _inverse(C)
    gram = [[A[k][j] * (-1) ** j * wr for k in range(n)] for j in range(n)]
    return gram, wr


def form_value(gram: list, x: Sequence, y: Sequence) -> Fraction:
    return sum((x[i] * gram[i][j] * y[j] for i in range(len(x)) for j in range(len(y)) if x[i] and y[j]), Fraction(0))


def form_symmetry(gram: list) -> int:
    """+1 for symmetric, -1 for skew, 0 otherwise."""
    n = len(gram)
    if all(gram[i][j] == gram[j][i] for i in range(n) for j in range(n)):
        return 1
    if all(gram[i][j] == -gram[j][i] for i in range(n) for j in range(n)):
        return -1
    return 0


def orthogonal_complement(gram: list, vectors: Sequence) -> list:
    """Coordinate basis of the complement of ``span(vectors)``."""
    n = len(gram)
    rows = [[sum(v[i] * gram[i][j] for i in range(n)) for j in range(n)] for v in vectors]
    return nullspace(rows, n) if rows else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def coords_rank(vectors: Sequence) -> int:
    return len(rref(vectors)[1]) if vectors else 0


def same_coord_span(a: Sequence, b: Sequence) -> bool:
    ra, rb = coords_rank(a), coords_rank(b)
    return ra == rb and coords_rank(list(a) + list(b)) == ra


def _solve_quadratic(a: Fraction, b: Fraction, c: Fraction) -> Optional[Fraction]:
    """A rational root of ``a t^2 + b t + c`` if one exists."""
    if a == 0:
        return None if b == 0 else -c / b
    disc = b * b - 4 * a * c
    if disc < 0:
        return None
    try:
        root = integer_nth_root(disc, 2)
    except ValueError:
        return None
    return (-b + root) / (2 * a)


def _isotropic_vector(gram: list, span: list, sign: int) -> Optional[list]:
    q = lambda x, y: form_value(gram, x, y)
    if sign == -1:
        return span[0]
    for v in span:
        if q(v, v) == 0:
            return v
    # x + t y with a rational root of the restricted quadratic
    seeds = list(span)
    k = len(span)
    for coeffs in product(range(-2, 3), repeat=k):
        if any(coeffs):
            seeds.append([sum(c * v[i] for c, v in zip(coeffs, span)) for i in range(len(span[0]))])
    for x in seeds:
        for y in span:
            t = _solve_quadratic(q(y, y), q(x, y) + q(y, x), q(x, x))
            if t is not None:
                v = [a + t * b for a, b in zip(x, y)]
                if any(v) and q(v, v) == 0:
                    return v
    return None


def hyperbolic_decomposition(gram: list, span: Optional[list] = None) -> tuple:
    """Split ``span`` into pairs ``(x, y)`` of isotropic vectors and an anisotropic rest."""
    n = len(gram)
    if span is None:
        span = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    sign = form_symmetry(gram)
    if sign == 0:
        raise NotSelfDual("the form is neither symmetric nor skew")
    q = lambda x, y: form_value(gram, x, y)
    pairs = []
    while len(span) >= 2:
        x = _isotropic_vector(gram, span, sign)
        if x is None:
            if sign == 1 and len(span) == 1:
                break
            raise NoRationalWitt(f"no rational isotropic vector in a {len(span)}-dimensional block")
        y0 = next((v for v in span if q(x, v) != 0), None)
        if y0 is None:
            raise NotSelfDual("degenerate canonical form")
        y = y0 if sign == -1 else [a - q(y0, y0) / (2 * q(x, y0)) * b for a, b in zip(y0, x)]
        pairs.append((x, y))
        xy, yx = q(x, y), q(y, x)
        rest = [
            [s_k - q(s, y) / xy * x_k - q(s, x) / yx * y_k for s_k, x_k, y_k in zip(s, x, y)]
            for s in span
        ]
        rows, pivots = rref(rest)
        span = rows[: len(pivots)]
    return pairs, span


@dataclass
class WittResult:
    gram: list
    basis: tuple
    scale: Optional[Fraction]
    gap: Optional[tuple] = None  # (value, degree): basis * lam with lam**degree = value is Witt

    @property
    def exact(self) -> bool:
        return self.gap is None

    def identities(self) -> list:
        """``v_{N+1-i} == Wr(v without i)`` for every ``i`` (only meaningful when exact)."""
        b = list(self.basis)
        n = len(b)
        return [b[n - 1 - i] == wronskian(b[:i] + b[i + 1:]) for i in range(n)]


def canonical_witt(space) -> WittResult:
    """Gram matrix of the canonical form and a Witt basis reached by hyperbolic reduction."""
    if isinstance(space, SuperSpace):
        space = space.whole()
    basis = list(space.basis)
    gram, _ = canonical_form(basis)
    n = len(basis)
    if n == 0:
        return WittResult(gram, (), Fraction(1))
    pairs, rest = hyperbolic_decomposition(gram)
    if len(rest) > 1 or len(rest) != n % 2:
        raise NoRationalWitt("anisotropic part larger than one")
    q = lambda x, y: form_value(gram, x, y)
    c = Fraction(1)
    middle = n // 2  # zero-based middle position for odd n
    if rest:
        c = (-1) ** middle * q(rest[0], rest[0])
    coords = [None] * n
    for i, (x, y) in enumerate(pairs):
        coords[i] = x
        scale = c * (-1) ** i / q(x, y)
        coords[n - 1 - i] = [scale * v for v in y]
    if rest:
        coords[middle] = rest[0]
    funcs = [combine(v, basis) for v in coords]
    wr = _constant_wronskian(funcs)
    # scaling by lam multiplies the Gram by lam^2 and Wr by lam^n
    target, degree = c / wr, n - 2
    lam: Optional[Fraction]
    gap = None
    if degree == 0:
        lam = Fraction(1) if target == 1 else None
    elif degree < 0:
        lam = 1 / target
    else:
        try:
            lam = integer_nth_root(target, degree)
        except ValueError:
            lam = None
    if lam is None:
        gap = (target, degree)
        return WittResult(gram, tuple(funcs), None, gap)
    return WittResult(gram, tuple(f * lam for f in funcs), lam)


# -- self-duality report ---------------------------------------------------------------

def span_of_coords(space: SuperSpace, vectors: Sequence) -> list:
    return [combine(v, space.basis) for v in vectors]


def v_u_space(V: FunctionSpace, U: FunctionSpace) -> FunctionSpace:
    """``<Wr(u_1..u_N, v_i) / Wr(U)>``."""
    u = list(U.basis)
    wr = wronskian(u)
    return FunctionSpace(tuple(wronskian(u + [v]) / wr for v in V.basis))


def selfdual_report(space: SuperSpace, operator: Optional[RatPDO] = None) -> dict:
    """Exact checks of the self-duality package; failures are listed, never raised."""
    checks: dict = {}
    details: dict = {}
    operator = operator or space.operator
    M, N = space.dims
    wr_w = wronskian(space.basis)
    details["wronskian_W"] = str(wr_w)
    checks["wronskian_W_is_one"] = not wr_w.is_zero() and _monic_rf(wr_w) == RF_ONE
    checks["wronskian_V_equals_U"] = space.V.monic_wronskian() == space.U.monic_wronskian()
    try:
        gram = space.gram()
    except NotSelfDual as exc:
        gram = None
        details["form_error"] = str(exc)
    if gram is not None:
        vcoords = [[Fraction(int(i == j)) for j in range(M + N)] for i in range(M)]
        ucoords = [[Fraction(int(i == j)) for j in range(M + N)] for i in range(M, M + N)]
        checks["V_is_U_perp"] = same_coord_span(orthogonal_complement(gram, ucoords), vcoords)
        checks["U_is_V_perp"] = same_coord_span(orthogonal_complement(gram, vcoords), ucoords)
        sym = form_symmetry(gram)
        details["form_symmetry"] = {1: "symmetric", -1: "skew", 0: "neither"}[sym]
        checks["form_parity"] = M + N == 0 or ((sym == 1) == ((M + N) % 2 == 1) and sym != 0)
        try:
            witt = canonical_witt(space)
            if witt.exact:
                checks["witt_identities"] = all(witt.identities())
            else:
                details["witt_gap"] = [str(witt.gap[0]), witt.gap[1]]
        except NoRationalWitt as exc:
            details["witt_gap"] = str(exc)
    else:
        checks["V_is_U_perp"] = checks["U_is_V_perp"] = checks["form_parity"] = False
    V_U = v_u_space(space.V, space.U)
    U_V = v_u_space(space.U, space.V)
    checks["V_dual_is_V_U"] = dual_space(space.V).same_span(V_U) if M else True
    checks["U_dual_is_U_V"] = dual_space(space.U).same_span(U_V) if N else True
    DV, DU = diffop_from_basis(space.V), diffop_from_basis(space.U)
    exchanged = left_to_right(diffop_from_basis(U_V), diffop_from_basis(V_U))
    checks["exchange_identity"] = frac_equal(exchanged, RatPDO(DV, DU))
    if operator is not None:
        checks["operator_matches_kernels"] = frac_ratio(RatPDO(DV, DU), operator) is not None
    failures = sorted(k for k, v in checks.items() if not v)
    return {"dims": [M, N], "checks": checks, "failures": failures, "ok": not failures, "details": details}


# -- superflags ------------------------------------------------------------------------

@dataclass(frozen=True)
class SuperFlag:
    """Homogeneous generating basis: ``F_k`` is spanned by the first ``k`` entries."""

    basis: tuple  # ((function, parity), ...)

    def __post_init__(self):
        items = tuple((as_rf(f), int(s)) for f, s in self.basis)
        if any(s not in (1, -1) for _, s in items):
            raise ValueError("parities must be +1 or -1")
        object.__setattr__(self, "basis", items)
        if items and wronskian([f for f, _ in items]).is_zero():
            raise DependentBasis("flag basis is dependent")

    @property
    def parity(self) -> tuple:
        return tuple(s for _, s in self.basis)

    @property
    def evens(self) -> list:
        return [f for f, s in self.basis if s == 1]

    @property
    def odds(self) -> list:
        return [f for f, s in self.basis if s == -1]

    def prefix(self, k: int) -> list:
        return [f for f, _ in self.basis[:k]]

    def to_json(self) -> dict:
        return {"basis": [str(f) for f, _ in self.basis], "parity": list(self.parity)}

    @classmethod
    def from_json(cls, data) -> "SuperFlag":
        return cls(tuple(zip((RationalFunction.from_strings(t) for t in data["basis"]), data["parity"])))

    @classmethod
    def associated(cls, vs: Sequence, us: Sequence, parity: Sequence) -> "SuperFlag":
        vs, us = list(vs), list(us)
        out, a, b = [], 0, 0
        for s in parity:
            if s == 1:
                out.append((vs[a], 1))
                a += 1
            else:
                out.append((us[b], -1))
                b += 1
        if a != len(vs) or b != len(us):
            raise ValueError("parity word does not match the dimensions")
        return cls(tuple(out))


def _x_space(vs: list, us: list, s: Sequence, i: int) -> list:
    """``v_1..v_a, u_1..u_b`` with ``a`` evens after position ``i`` and ``b`` odds up to ``i``."""
    a = sum(1 for t in s[i:] if t == 1)
    b = sum(1 for t in s[:i] if t == -1)
    return vs[:a] + us[:b]


def flag_to_factorization(flag: SuperFlag) -> list:
    """Chain ``[(f_i, s_i)]`` with ``f_i = s_i ln'(Wr X_{i-1} / Wr X_i)``."""
    s = flag.parity
    vs, us = flag.evens, flag.odds
    wrs = [wronskian(_x_space(vs, us, s, i)) for i in range(len(s) + 1)]
    return [(log_derivative(wrs[i - 1] / wrs[i]) * s[i - 1], s[i - 1]) for i in range(1, len(s) + 1)]


def _kernel_in(space: SuperSpace, op: DiffOp) -> list:
    images = [op.apply(f) for f in space.basis]
    n = len(images)
    if all(g.is_zero() for g in images):
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    _, rows = _numerator_rows(images)
    columns = [[rows[j][k] for j in range(n)] for k in range(len(rows[0]))]
    return nullspace(columns, n)


def factorization_to_flag(chain: Sequence, space: SuperSpace) -> SuperFlag:
    """Recover the superflag whose Wronskian chain is ``chain``."""
    chain = [(as_rf(f), int(s)) for f, s in chain]
    s = [t for _, t in chain]
    M, N = space.dims
    if sum(1 for t in s if t == 1) != M or len(s) != M + N:
        raise ChainNotFactorization("parity word does not match the superspace")
    DU = diffop_from_basis(space.U)
    v_flag: dict = {M: [[Fraction(int(i == j)) for j in range(M)] for i in range(M)]}
    u_flag: dict = {0: []}
    for i in range(len(s) + 1):
        tail = RatPDO.from_chain(chain[i:]) if i < len(s) else RatPDO(ONE_OP)
        op = (tail * RatPDO(DU)).reduced()
        if op.den.order != 0:
            raise ChainNotFactorization(f"tail {i} times D_U is not a differential operator")
        kern = _kernel_in(space, op.num)
        a = sum(1 for t in s[i:] if t == 1)
        b = sum(1 for t in s[:i] if t == -1)
        if len(kern) != a + b or op.num.order != a + b:
            raise ChainNotFactorization(f"kernel of tail {i} has the wrong dimension")
        v_rows = [row[:M] for row in _split_kernel(kern, M, True)]
        u_rows = [row[M:] for row in _split_kernel(kern, M, False)]
        if len(v_rows) != a or len(u_rows) != b:
            raise ChainNotFactorization(f"kernel of tail {i} is not homogeneous")
        v_flag[a], u_flag[b] = v_rows, u_rows
    vs = _flag_basis(v_flag, M, space.V.basis)
    us = _flag_basis(u_flag, N, space.U.basis)
    return SuperFlag.associated(vs, us, s)


def _split_kernel(kern: list, M: int, even: bool) -> list:
    """Basis of the vectors in ``span(kern)`` supported on one half."""
    if not kern:
        return []
    n = len(kern[0])
    other = list(range(M, n)) if even else list(range(M))
    if other:
        relations = nullspace([[v[j] for v in kern] for j in other], len(kern))
    else:
        relations = [[Fraction(int(i == j)) for j in range(len(kern))] for i in range(len(kern))]
    vectors = [[sum(c * v[j] for c, v in zip(rel, kern)) for j in range(n)] for rel in relations]
    if not vectors:
        return []
    rows, pivots = rref(vectors)
    return rows[: len(pivots)]


def _flag_basis(levels: dict, dim: int, funcs: Sequence) -> list:
    chosen: list = []
    for k in range(1, dim + 1):
        level, prev = levels.get(k), levels.get(k - 1, [])
        if level is None or coords_rank(prev + level) != k:
            raise ChainNotFactorization(f"flag level {k} is missing or not nested")
        chosen.append(next(v for v in level if coords_rank(chosen + [v]) == k))
    return [combine(v, funcs) for v in chosen]


def same_flag(a: SuperFlag, b: SuperFlag) -> bool:
    if a.parity != b.parity:
        return False
    for k in range(1, len(a.basis) + 1):
        if span_rank(a.prefix(k) + b.prefix(k)) != k:
            return False
    return True


def chain_is_symmetric(chain: Sequence) -> bool:
    n = len(chain)
    return all(
        as_rf(chain[i][0]) == -as_rf(chain[n - 1 - i][0]) and chain[i][1] == chain[n - 1 - i][1]
        for i in range(n)
    )


def is_isotropic(flag: SuperFlag, space: SuperSpace) -> bool:
    gram = space.gram()
    n = len(flag.basis)
    coords = [space.coords(f) for f, _ in flag.basis]
    for k in range(1, n):
        if not same_coord_span(orthogonal_complement(gram, coords[:k]), coords[: n - k]):
            return False
    return True


# -- random isotropic flags ----------------------------------------------------------

def _restricted_gram(gram: list, idx: Sequence) -> list:
    return [[gram[i][j] for j in idx] for i in idx]


def _antidiagonal_basis(gram: list) -> list:
    """Basis whose Gram matrix is supported on the antidiagonal."""
    n = len(gram)
    pairs, rest = hyperbolic_decomposition(gram)
    if len(rest) > 1:
        raise NoRationalWitt("anisotropic block of dimension > 1")
    out = [None] * n
    for i, (x, y) in enumerate(pairs):
        out[i], out[n - 1 - i] = x, y
    if rest:
        out[n // 2] = rest[0]
    return out


def _random_isometry(gram: list, vectors: list, rng: random.Random, steps: int = 2) -> list:
    n = len(gram)
    sign = form_symmetry(gram)
    q = lambda x, y: form_value(gram, x, y)
    for _ in range(steps):
        v = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
        if not any(v):
            continue
        if sign == 1:
            vv = q(v, v)
            if vv == 0:
                continue
            vectors = [[a - 2 * q(w, v) / vv * b for a, b in zip(w, v)] for w in vectors]
        else:
            lam = Fraction(rng.choice([-2, -1, 1, 2]))
            vectors = [[a + lam * q(w, v) * b for a, b in zip(w, v)] for w in vectors]
    return vectors


def random_symmetric_parity(M: int, N: int, rng: random.Random) -> tuple:
    if M % 2 and N % 2:
        raise ValueError("both dimensions odd")
    half = [1] * (M // 2) + [-1] * (N // 2)
    rng.shuffle(half)
    middle = [1] if M % 2 else ([-1] if N % 2 else [])
    return tuple(half + middle + list(reversed(half)))


def random_isotropic_flag(space: SuperSpace, rng: random.Random, steps: int = 2) -> SuperFlag:
    """Isotropic flag from random isometric images of antidiagonal bases of V and U."""
    gram = space.gram()
    M, N = space.dims
    parts = []
    for idx, funcs in ((range(M), space.V.basis), (range(M, M + N), space.U.basis)):
        g = _restricted_gram(gram, list(idx))
        if not g:
            parts.append([])
            continue
        vectors = _random_isometry(g, _antidiagonal_basis(g), rng, steps)
        parts.append([combine(v, funcs) for v in vectors])
    parity = random_symmetric_parity(M, N, rng)
    return SuperFlag.associated(parts[0], parts[1], parity)


def chain_json(chain: Sequence) -> list:
    return chain_to_json(chain)


__all__ = [
    "ChainNotFactorization",
    "DependentBasis",
    "FunctionSpace",
    "NoRationalWitt",
    "NonRationalKernel",
    "NotSelfDual",
    "SuperFlag",
    "SuperSpace",
    "WittResult",
    "canonical_basis",
    "canonical_form",
    "canonical_witt",
    "chain_is_symmetric",
    "coordinates",
    "diffop_from_basis",
    "dual_space",
    "factorization_to_flag",
    "flag_to_factorization",
    "form_symmetry",
    "form_value",
    "is_isotropic",
    "kernel_of_chain",
    "orthogonal_complement",
    "random_isotropic_flag",
    "same_flag",
    "selfdual_report",
    "separate_chain",
    "span_rank",
    "superkernel",
    "v_u_space",
]
