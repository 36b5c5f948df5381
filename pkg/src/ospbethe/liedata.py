"""Parity sequences, Cartan matrices, weights and the (C, T) transformation rules.

Directions (moves) are labelled as in the usual mathematical convention:
``1 .. r`` for simple roots and ``"f"`` for the fake move of type D.  Matrices
and sequences themselves are ordinary 0-based Python sequences.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactalg import FactoredFunction, Polynomial, as_fraction, pi_of

Move = Union[int, str]

GL = "gl"
OSP_ODD = "osp_odd"  # osp(2m+1|2n)
OSP_EVEN = "osp_even"  # osp(2m|2n)


class InvalidMove(ValueError):
    pass


class TablePatternError(ValueError):
    pass


@dataclass(frozen=True)
class Algebra:
    kind: str
    m: int
    n: int

    def __post_init__(self):
        if self.kind not in (GL, OSP_ODD, OSP_EVEN):
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.m < 0 or self.n < 0 or self.m + self.n == 0:
            raise ValueError("need m + n >= 1")
        if self.kind == OSP_EVEN and (self.m, self.n) == (1, 0):
            raise ValueError("osp(2|0) has no simple roots")

    @classmethod
    def parse(cls, name: str, m: Optional[int] = None, n: Optional[int] = None) -> "Algebra":
        """Accept ``"gl(2|1)"``, ``"osp(3|2)"``, ``"osp(4|2)"`` or a bare kind plus m, n."""
        match = re.fullmatch(r"\s*(gl|osp)\s*\(\s*(\d+)\s*\|\s*(\d+)\s*\)\s*", name)
        if match:
            family, a, b = match.group(1), int(match.group(2)), int(match.group(3))
            if family == "gl":
                alg = cls(GL, a, b)
            else:
                if b % 2:
                    raise ValueError(f"osp(p|q) needs even q, got {name}")
                alg = cls(OSP_ODD, a // 2, b // 2) if a % 2 else cls(OSP_EVEN, a // 2, b // 2)
            if (m is not None and m != alg.m) or (n is not None and n != alg.n):
                raise ValueError(f"{name} is inconsistent with m={m}, n={n}")
            return alg
        aliases = {"gl": GL, "osp_odd": OSP_ODD, "osp_even": OSP_EVEN, "B": OSP_ODD, "D": OSP_EVEN}
        if name in aliases and m is not None and n is not None:
            return cls(aliases[name], m, n)
        raise ValueError(f"cannot parse algebra {name!r}")

    @property
    def r(self) -> int:
        return self.m + self.n

    @property
    def iota(self) -> Optional[int]:
        return {OSP_ODD: 1, OSP_EVEN: 0}.get(self.kind)

    @property
    def num_roots(self) -> int:
        """Number of simple roots, which is also the length of a Bethe tuple."""
        return self.r - 1 if self.kind == GL else self.r

    def __str__(self):
        if self.kind == GL:
            return f"gl({self.m}|{self.n})"
        return f"osp({2 * self.m + (self.iota or 0)}|{2 * self.n})"


@dataclass(frozen=True)
class ExtParity:
    """A parity sequence with the binary choice ``kappa`` and its algebra."""

    algebra: Algebra
    s: tuple
    kappa: int = 1

    def __post_init__(self):
        s = tuple(int(v) for v in self.s)
        object.__setattr__(self, "s", s)
        if len(s) != self.algebra.r or any(v not in (1, -1) for v in s):
            raise ValueError(f"parity {s} is not a sequence of +-1 of length {self.algebra.r}")
        if s.count(1) != self.algebra.m:
            raise ValueError(f"parity {s} must contain exactly {self.algebra.m} entries +1")
        if self.kappa not in (1, -1):
            raise ValueError("kappa must be +-1")
        if self.algebra.kind != OSP_EVEN and self.kappa != 1:
            raise ValueError("kappa = -1 only exists for osp(2m|2n)")
        if self.kappa == -1 and self.algebra.m == 0:
            raise ValueError("kappa = -1 needs at least one even fermionic direction")

    @property
    def r(self) -> int:
        return self.algebra.r

    @property
    def type_d(self) -> bool:
        return self.algebra.kind == OSP_EVEN and self.s[-1] == 1

    @property
    def type_c(self) -> bool:
        return self.algebra.kind == OSP_EVEN and self.s[-1] == -1

    def moves(self) -> list:
        """All reproduction directions available at this parity."""
        out = list(range(1, self.algebra.num_roots + 1))
        if self.type_d and self.r >= 2:
            out.append("f")
        return out

    def label(self) -> str:
        body = "".join("+" if v == 1 else "-" for v in self.s)
        if self.algebra.kind == OSP_EVEN:
            return f"{body};{'+' if self.kappa == 1 else '-'}"
        return body

    def to_json(self) -> dict:
        return {"parity": list(self.s), "kappa": self.kappa}


def standard_parity(algebra: Algebra, kappa: int = 1) -> ExtParity:
    """``(-1, .., -1, 1, .., 1)``: the odd directions first."""
    return ExtParity(algebra, (-1,) * algebra.n + (1,) * algebra.m, kappa)


def distinguished_parity(algebra: Algebra, kappa: int = 1) -> ExtParity:
    return ExtParity(algebra, (1,) * algebra.m + (-1,) * algebra.n, kappa)


def all_parities(algebra: Algebra) -> list:
    from itertools import combinations

    out = []
    kappas = (1, -1) if algebra.kind == OSP_EVEN and algebra.m > 0 else (1,)
    for plus in combinations(range(algebra.r), algebra.m):
        s = tuple(1 if k in plus else -1 for k in range(algebra.r))
        for kappa in kappas:
            out.append(ExtParity(algebra, s, kappa))
    return out


def sigma_perm(s: Sequence[int]) -> tuple:
    """Return ``(sigma, plus_counts, minus_counts)`` (sigma is 1-based)."""
    m = sum(1 for v in s if v == 1)
    sigma, plus, minus = [], [], []
    seen_plus = seen_minus = 0
    for i, v in enumerate(s):
        if v == 1:
            seen_plus += 1
            sigma.append(seen_plus)
        else:
            seen_minus += 1
            sigma.append(m + seen_minus)
        plus.append(sum(1 for w in s[i + 1 :] if w == 1))
        minus.append(sum(1 for w in s[:i] if w == -1))
    return tuple(sigma), tuple(plus), tuple(minus)


# -- Cartan data ----------------------------------------------------------

def _gl_blocks(s: Sequence[int], size: int, tail: int) -> list:
    """Symmetrized matrix from the 2x2 blocks, with ``s_{len+1} = tail``."""
    ext = list(s) + [tail]
    b = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        b[i][i] = Fraction(ext[i] + ext[i + 1])
        if i + 1 < size:
            b[i][i + 1] = b[i + 1][i] = Fraction(-ext[i + 1])
    return b


def symmetrized_cartan(p: ExtParity) -> list:
    s, kind, r = p.s, p.algebra.kind, p.r
    if kind == GL:
        return _gl_blocks(s, r - 1, 0)
    if kind == OSP_ODD:
        return _gl_blocks(s, r, 0)
    b = _gl_blocks(s, r, 0)
    corner = _even_corner(s)
    lo = r - 3
    for a in range(3):
        for c in range(3):
            if lo + a >= 0 and lo + c >= 0:
                b[lo + a][lo + c] = Fraction(corner[a][c])
    # entries coupling row r-1 (1-based) to earlier rows stay from the blocks
    return b


def _even_corner(s: Sequence[int]) -> list:
    prev = s[-3] if len(s) >= 3 else 0
    last = (s[-2], s[-1]) if len(s) >= 2 else (0, s[-1])
    table = {
        (-1, -1): [[prev - 1, 1, 0], [1, -2, 2], [0, 2, -4]],
        (1, -1): [[prev + 1, -1, 0], [-1, 0, 2], [0, 2, -4]],
        (1, 1): [[prev + 1, -1, -1], [-1, 2, 0], [-1, 0, 2]],
        (-1, 1): [[prev - 1, 1, 1], [1, 0, -2], [1, -2, 0]],
    }
    if len(s) == 1:
        # rank one: only the long/short root itself
        return [[0, 0, 0], [0, 0, 0], [0, 0, -4 if s[0] == -1 else 2]]
    return table[last]


def cartan_matrix(p: ExtParity) -> list:
    """Cartan matrix ``C^s`` as a list of rows of Fractions (independent of kappa)."""
    b = symmetrized_cartan(p)
    s, kind, r = p.s, p.algebra.kind, p.r
    size = len(b)
    c = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            if kind == GL:
                factor = Fraction(s[i])
            elif kind == OSP_ODD:
                factor = Fraction(s[i] * (2 if i == r - 1 else 1))
            elif i != r - 1:
                factor = Fraction(s[i])
            elif s[-1] == 1:
                factor = Fraction(s[r - 2]) if r >= 2 else Fraction(1)
            else:
                factor = Fraction(s[-1], 2)
            c[i][j] = factor * b[i][j]
    return c


def symmetrizer(c: Sequence[Sequence]) -> Optional[list]:
    """Nonzero integers ``d`` with ``d_i c_ij = d_j c_ji``, or ``None``."""
    from math import lcm

    size = len(c)
    d: list = [None] * size
    for start in range(size):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(size):
                if j == i or c[i][j] == 0:
                    continue
                if c[j][i] == 0:
                    return None
                want = d[i] * Fraction(c[i][j]) / Fraction(c[j][i])
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    return None
    den = lcm(*(v.denominator for v in d)) if d else 1
    return [int(v * den) for v in d]


def is_generalized_cartan(c: Sequence[Sequence]) -> bool:
    size = len(c)
    for i in range(size):
        if c[i][i] not in (0, 2):
            return False
        for j in range(size):
            if (c[i][j] == 0) != (c[j][i] == 0):
                return False
    return symmetrizer(c) is not None


@dataclass(frozen=True)
class CartanData:
    C: tuple
    T: tuple

    def __post_init__(self):
        object.__setattr__(self, "C", tuple(tuple(Fraction(v) for v in row) for row in self.C))
        object.__setattr__(self, "T", tuple(self.T))
        if len(self.C) != len(self.T):
            raise ValueError("C and T have different sizes")

    @property
    def size(self) -> int:
        return len(self.C)

    @property
    def pi(self) -> tuple:
        return tuple(pi_of(t) for t in self.T)

    def is_admissible(self) -> bool:
        for i, row in enumerate(self.C):
            if row[i] == 2:
                if any(v.denominator != 1 or v > 0 for j, v in enumerate(row) if j != i):
                    return False
                if not self.T[i].is_polynomial():
                    return False
        return True


def table1_transform(cd: CartanData, i: int) -> CartanData:
    """Change of ``(C, T)`` under the fermionic move in direction ``i`` (1-based).

    A bosonic direction returns the data unchanged.
    """
    idx = i - 1
    c, t = cd.C, cd.T
    size = cd.size
    if not 0 <= idx < size:
        raise InvalidMove(f"direction {i} out of range")
    if c[idx][idx] != 0:
        return cd
    pi_i = FactoredFunction({z: 1 for z in t[idx].roots})
    new_c = [list(row) for row in c]
    new_t = list(t)
    for j in range(size):
        q2 = c[idx][j]
        if j == idx or q2 == 0:
            continue
        cjj, cji = c[j][j], c[j][idx]
        row = new_c[j]
        others = [k for k in range(size) if k not in (idx, j)]
        if cjj == 2 and cji == -1:
            for k in others:
                q1, q3 = c[idx][k], -c[j][k]
                row[k] = q1 + q2 + q2 * q3 if q1 != 0 else q2 * q3
            row[idx], row[j] = -q2, Fraction(0)
            new_t[j] = t[idx] / (t[j] ** q2 * pi_i ** q2)
        elif cjj == 2:
            q4 = -cji - 1
            for k in others:
                q1, q3 = c[idx][k], -c[j][k]
                row[k] = (q1 * (q4 + 1) + q2 * (q3 + q4 + 1)) / (q2 * q4) if q1 != 0 else q3 / q4
            row[idx], row[j] = -(q4 + 1) / q4, Fraction(2)
            inner = t[idx] ** ((q4 + 1) / q2) / (pi_i ** (q4 + 1) * t[j])
            new_t[j] = inner ** (1 / q4)
        elif cjj == 0:
            q4 = -cji
            for k in others:
                q1, q3 = c[idx][k], -c[j][k]
                row[k] = q3 / q4 + q1 / q2 + 1 if q1 != 0 else q3 / q4
            row[idx], row[j] = Fraction(-1), Fraction(2)
            new_t[j] = t[idx] ** (1 / q2) / (pi_i * t[j] ** (1 / q4))
        else:
            raise TablePatternError(f"row {j + 1} has diagonal entry {cjj}")
    return CartanData(new_c, new_t)


def rescale_rows(cd: CartanData, factors: Sequence) -> CartanData:
    """Multiply row ``j`` by ``d_j`` and raise ``T_j`` to ``d_j`` (zero-length rows only)."""
    new_c, new_t = [], []
    for j, (row, tj, d) in enumerate(zip(cd.C, cd.T, factors)):
        d = as_fraction(d)
        if d != 1 and cd.C[j][j] != 0:
            raise ValueError("only rows with zero diagonal may be rescaled")
        new_c.append([v * d for v in row])
        new_t.append(tj ** d)
    return CartanData(new_c, new_t)


def swap_last_two(cd: CartanData) -> CartanData:
    order = list(range(cd.size))
    order[-2], order[-1] = order[-1], order[-2]
    c = [[cd.C[a][b] for b in order] for a in order]
    return CartanData(c, [cd.T[a] for a in order])


# -- parity and weight moves ---------------------------------------------

def _swap(s: tuple, i: int) -> tuple:
    out = list(s)
    out[i - 1], out[i] = out[i], out[i - 1]
    return tuple(out)


def parity_step(p: ExtParity, move: Move) -> ExtParity:
    r = p.r
    if move == "f":
        if not p.type_d:
            raise InvalidMove("the fake move exists only in type D")
        return ExtParity(p.algebra, p.s, -p.kappa)
    if not isinstance(move, int) or not 1 <= move <= p.algebra.num_roots:
        raise InvalidMove(f"invalid direction {move!r} for {p.algebra}")
    if move < r:
        return ExtParity(p.algebra, _swap(p.s, move), p.kappa)
    # move == r (osp only)
    if p.algebra.kind == OSP_ODD or p.type_c:
        return p
    return ExtParity(p.algebra, _swap(p.s, r - 1), p.s[r - 2] * p.kappa)


def weight_step(coords: Sequence, p: ExtParity, move: Move) -> tuple:
    """Coordinates of a highest weight after the parity move ``move``."""
    coords = tuple(as_fraction(v) for v in coords)
    r = p.r
    if move == "f":
        if not p.type_d:
            raise InvalidMove("the fake move exists only in type D")
        return coords[:-1] + (-coords[-1],)
    if not isinstance(move, int) or not 1 <= move <= p.algebra.num_roots:
        raise InvalidMove(f"invalid direction {move!r} for {p.algebra}")
    if move < r:
        i = move - 1
        if p.s[i] == p.s[i + 1]:
            return coords
        a, b = coords[i], coords[i + 1]
        eta = 1 if a + b != 0 else 0
        return coords[:i] + (b + eta, a - eta) + coords[i + 2 :]
    if p.algebra.kind == OSP_ODD or p.type_c:
        return coords
    # type D: compose through the fake move
    flipped = weight_step(coords, p, "f")
    q = parity_step(p, "f")
    moved = weight_step(flipped, q, r - 1)
    if p.s[r - 2] == 1:
        return weight_step(moved, parity_step(q, r - 1), "f")
    return moved


def hook_weights(mu: Sequence[int], m: int, n: int, kind: int = 1) -> tuple:
    """Standard-parity coordinates of the hook-partition weight ``mu_+`` or ``mu_-``."""
    mu = [int(v) for v in mu if int(v) != 0]
    if any(a < b for a, b in zip(mu, mu[1:])) or any(v < 0 for v in mu):
        raise ValueError(f"{mu} is not a partition")
    if len(mu) > n and mu[n] > m:
        raise ValueError(f"{mu} is not an ({n}|{m})-hook partition")
    conj = [sum(1 for v in mu if v > j) for j in range(mu[0] if mu else 0)]
    deltas = [Fraction(mu[i] if i < len(mu) else 0) for i in range(n)]
    eps = [Fraction(max((conj[j] if j < len(conj) else 0) - n, 0)) for j in range(m)]
    if kind not in (1, -1):
        raise ValueError("kind must be +1 or -1")
    if kind == -1 and m:
        eps[-1] = -eps[-1]
    return tuple(deltas + eps)


def path_to(target: ExtParity) -> list:
    """Moves taking ``standard_parity(.., kappa)`` to ``target`` through [i] swaps."""
    current = list(standard_parity(target.algebra).s)
    moves = []
    goal = list(target.s)
    for pos in range(len(goal)):
        if current[pos] == goal[pos]:
            continue
        k = next(k for k in range(pos + 1, len(current)) if current[k] == goal[pos])
        for j in range(k, pos, -1):
            current[j - 1], current[j] = current[j], current[j - 1]
            moves.append(j)
    return moves


def coords_at(standard: Sequence, target: ExtParity) -> tuple:
    """Transport coordinates from the standard parity (kappa = 1) to ``target``."""
    p = standard_parity(target.algebra)
    coords = tuple(as_fraction(v) for v in standard)
    if target.kappa == -1:
        if not p.type_d:
            raise InvalidMove("kappa = -1 needs a type D standard parity")
        coords = weight_step(coords, p, "f")
        p = parity_step(p, "f")
    for move in path_to(target):
        coords = weight_step(coords, p, move)
        p = parity_step(p, move)
    assert p == target
    return coords


@dataclass(frozen=True)
class WeightData:
    """Weight coordinates at a given parity together with the evaluation points."""

    weights: tuple
    points: tuple
    parity: Optional[ExtParity] = field(default=None)

    def __post_init__(self):
        object.__setattr__(
            self, "weights", tuple(tuple(as_fraction(v) for v in w) for w in self.weights)
        )
        object.__setattr__(self, "points", tuple(as_fraction(z) for z in self.points))
        if len(set(self.points)) != len(self.points):
            raise ValueError("evaluation points must be distinct")
        if len(self.weights) != len(self.points):
            raise ValueError("one weight per evaluation point is required")

    def step(self, move: Move) -> "WeightData":
        if self.parity is None:
            raise ValueError("weight data without parity cannot be moved")
        return WeightData(
            tuple(weight_step(w, self.parity, move) for w in self.weights),
            self.points,
            parity_step(self.parity, move),
        )


def p_sequence(w: WeightData, r: int) -> list:
    return [
        FactoredFunction({z: coords[i] for z, coords in zip(w.points, w.weights)})
        for i in range(r)
    ]


def pt_sequences(w: WeightData, p: ExtParity, check: bool = True) -> tuple:
    """Return ``(P, T)`` for weights given in the coordinates of ``p``."""
    r = p.r
    s = p.s
    for coords in w.weights:
        if len(coords) != r:
            raise ValueError(f"weight {coords} must have {r} coordinates")
    P = p_sequence(w, r)
    T = [P[i] * P[i + 1] ** (-s[i] * s[i + 1]) for i in range(r - 1)]
    kind = p.algebra.kind
    if kind == OSP_ODD:
        T.append(P[-1] ** 2)
    elif kind == OSP_EVEN:
        if p.type_d:
            T.append(P[-2] * P[-1] ** s[-2])
        else:
            T.append(P[-1])
    if check:
        c = cartan_matrix(p)
        for i, t in enumerate(T):
            if not t.has_integer_exponents():
                raise ValueError(f"T_{i + 1} = {t} has fractional exponents")
            if c[i][i] == 2 and not t.is_polynomial():
                raise ValueError(f"T_{i + 1} = {t} is not a polynomial; weight data inconsistent")
    return P, T


def cartan_data(w: WeightData, p: ExtParity) -> CartanData:
    _, T = pt_sequences(w, p)
    return CartanData(cartan_matrix(p), T)


def gl_typical(coords_plus: Sequence, m: int) -> bool:
    """Typicality of a gl(m|n) weight given by its distinguished-parity coordinates."""
    r = len(coords_plus)
    inner = [coords_plus[i] if i < m else -coords_plus[i] for i in range(r)]
    for i in range(1, m + 1):
        for j in range(m + 1, r + 1):
            if inner[i - 1] - inner[j - 1] - i - j + 1 + 2 * m == 0:
                return False
    return True


def lift_parity(p: ExtParity) -> ExtParity:
    """The gl parity sequence containing an osp parity as its first half."""
    alg = p.algebra
    if alg.kind == OSP_ODD:
        return ExtParity(Algebra(GL, 2 * alg.m, 2 * alg.n), p.s + tuple(reversed(p.s)))
    if alg.kind == OSP_EVEN:
        return ExtParity(Algebra(GL, 2 * alg.m, 2 * alg.n + 1), p.s + (-1,) + tuple(reversed(p.s)))
    raise ValueError("only osp parities lift")


def lift_coords(coords: Sequence, p: ExtParity) -> tuple:
    coords = tuple(as_fraction(v) for v in coords)
    mirror = tuple(-v for v in reversed(coords))
    if p.algebra.kind == OSP_ODD:
        return coords + mirror
    return coords + (Fraction(0),) + mirror


def a_typical(w: WeightData, p: ExtParity) -> bool:
    """Whether at least one weight lifts to a typical gl weight."""
    lp = lift_parity(p)
    target = distinguished_parity(lp.algebra)
    for coords in w.weights:
        lifted = lift_coords(coords, p)
        current = lp
        # bubble the +1 entries to the front via fermionic swaps
        moves = _path_between(current.s, target.s)
        for move in moves:
            lifted = weight_step(lifted, current, move)
            current = parity_step(current, move)
        if gl_typical(lifted, lp.algebra.m):
            return True
    return False


def _path_between(source: Sequence[int], goal: Sequence[int]) -> list:
    current = list(source)
    moves = []
    for pos in range(len(goal)):
        if current[pos] == goal[pos]:
            continue
        k = next(k for k in range(pos + 1, len(current)) if current[k] == goal[pos])
        for j in range(k, pos, -1):
            current[j - 1], current[j] = current[j], current[j - 1]
            moves.append(j)
    return moves


def polys_to_strings(polys: Sequence[Polynomial]) -> list:
    return [p.to_strings() for p in polys]


def rescaling_between(a: CartanData, b: CartanData) -> Optional[list]:
    """Row factors ``d`` with ``b = rescale_rows(a, d)``, or ``None``.

    Only rows with zero diagonal may carry a factor other than 1.
    """
    if a.size != b.size:
        return None
    factors = []
    for j in range(a.size):
        row_a, row_b = a.C[j], b.C[j]
        ratios = {vb / va for va, vb in zip(row_a, row_b) if va != 0}
        if any((va == 0) != (vb == 0) for va, vb in zip(row_a, row_b)) or len(ratios) > 1:
            return None
        d = ratios.pop() if ratios else Fraction(1)
        if d != 1 and row_a[j] != 0:
            return None
        if a.T[j] ** d != b.T[j]:
            return None
        factors.append(d)
    return factors
