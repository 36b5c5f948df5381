import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from ospbethe.exactalg import RF_ONE, X, Polynomial, RationalFunction
from ospbethe.orepdo import (
    D,
    ONE_OP,
    DegenerateSwitch,
    DiffOp,
    RatPDO,
    diffop_adjoint,
    diffop_divrem,
    frac_adjoint,
    frac_equal,
    frac_inverse,
    frac_mul,
    frac_ratio,
    left_to_right,
    ore_common,
    switch_factors,
    symmetry_sign,
)
from conftest import random_op, random_rf, rational_functions

INV_X = RationalFunction(Polynomial([1]), X)


def op(*coeffs):
    return DiffOp(coeffs)


def inv(a: DiffOp) -> RatPDO:
    return RatPDO(ONE_OP, a)


# worked examples


def test_product_rule_relation():
    assert D * op(X) == op(1, X)


def test_product_of_conjugate_factors():
    a = RationalFunction(X * X + 1, X - 2)
    assert DiffOp.linear(a) * DiffOp.linear(-a) == op(a.derivative() - a * a, 0, 1)


def test_adjoint_examples():
    assert diffop_adjoint(D) == op(0, -1)
    assert diffop_adjoint(op(0, X)) == op(-1, -X)


def test_divrem_examples():
    assert diffop_divrem(D * D, D, "right") == (D, DiffOp())
    q, r = diffop_divrem(op(-X, 0, 1), DiffOp.linear(1), "right")
    assert q == op(1, 1) and r == op(1 - X)
    a = op(X)
    assert diffop_divrem(a, D * D, "right") == (DiffOp(), a)


def test_common_divisors_and_multiples():
    assert ore_common(D * D, D, "gcrd") == D
    assert ore_common(D, D, "lclm") == D
    assert ore_common(DiffOp.linear(INV_X), D, "lclm") == D * D


def test_fraction_examples():
    one = RatPDO(ONE_OP)
    assert frac_equal(frac_mul(RatPDO(D), inv(D)), one)
    folded = RatPDO.from_chain([(INV_X, 1), (0, -1), (-INV_X, 1)]).reduced()
    assert (folded.num.order, folded.den.order) == (2, 1)
    by_hand = frac_mul(frac_mul(RatPDO(DiffOp.linear(INV_X)), inv(D)), RatPDO(DiffOp.linear(-INV_X)))
    assert frac_equal(folded, by_hand)
    a = RatPDO(op(X, 1), op(2, 1))
    assert frac_equal(RatPDO(a.num, ONE_OP * a.den), a)
    assert not frac_equal(frac_mul(RatPDO(D), inv(D)), RatPDO(D))


def test_switch_plus_minus_example():
    lhs = RatPDO.from_chain([(INV_X, 1), (0, -1), (-INV_X, 1)])
    rhs = RatPDO.from_chain([(-INV_X, 1), (0, -1), (INV_X, 1)])
    assert frac_equal(lhs, rhs)


def test_symmetry_examples():
    assert symmetry_sign(RatPDO(D)) == -1
    f = RationalFunction(X + 1, X * X - 3)
    symmetric = RatPDO.from_chain([(f, 1), (0, -1), (-f, 1)])
    assert symmetry_sign(symmetric) is not None
    broken = RatPDO.from_chain([(f, 1), (0, -1), (-f + 1, 1)])
    assert symmetry_sign(broken) is None


def test_switch_examples():
    assert switch_factors(INV_X, 0) == (-INV_X, 0)
    assert switch_factors(3, Fraction(1, 2)) == (Fraction(1, 2), 3)
    with pytest.raises(DegenerateSwitch):
        switch_factors(INV_X, INV_X)


# properties


def test_random_operator_identities():
    rng = random.Random(11)
    for _ in range(40):
        a, b, c = (random_op(rng, rng.randint(0, 2), 2) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert diffop_adjoint(a * b) == diffop_adjoint(b) * diffop_adjoint(a)
        if not b.is_zero():
            q, r = diffop_divrem(a, b, "left")
            assert b * q + r == a and r.order < b.order


@settings(max_examples=25)
@given(rational_functions(2), rational_functions(2))
def test_switch_identity(a, b):
    if a == b:
        return
    c, e = switch_factors(a, b)
    lhs = RatPDO(DiffOp.linear(a), DiffOp.linear(b))
    assert frac_equal(lhs, left_to_right(DiffOp.linear(c), DiffOp.linear(e)))
    assert switch_factors(c, e, "denfirst") == (a, b)


@settings(max_examples=20)
@given(rational_functions(2))
def test_fraction_inverse_and_adjoint(f):
    r = RatPDO.from_chain([(f, 1), (0, -1), (f + 1, 1)])
    assert frac_equal(frac_mul(r, frac_inverse(r)), RatPDO(ONE_OP))
    assert frac_equal(frac_adjoint(frac_adjoint(r)), r)


def test_reduced_is_minimal_with_monic_denominator():
    rng = random.Random(5)
    for _ in range(10):
        f, g = random_rf(rng, 2), random_rf(rng, 2)
        r = RatPDO.from_chain([(f, 1), (g, -1), (f, -1), (g, 1)]).reduced()
        assert r.is_minimal()
        assert r.den.lc == RF_ONE


def test_ratio_detects_scalar_multiples():
    r = RatPDO.from_chain([(INV_X, 1), (0, -1)])
    scaled = RatPDO(r.num * op(Fraction(-3, 2)), r.den)
    assert frac_ratio(scaled, r) == Fraction(-3, 2)
    assert frac_ratio(RatPDO(D), r) is None
