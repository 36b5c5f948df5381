from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ospbethe.exactalg import FactoredFunction
from ospbethe.serialize import (
    ParseError,
    factored_from_json,
    factored_to_json,
    parse_rational_function,
    poly_from_json,
    poly_to_json,
    rf_to_text,
)
from conftest import polynomials, rational_functions, small_fractions


@given(rational_functions())
def test_rational_function_text_round_trip(f):
    assert parse_rational_function(rf_to_text(f)) == f


@given(polynomials(6))
def test_polynomial_json_round_trip(p):
    assert poly_from_json(poly_to_json(p)) == p


@given(st.dictionaries(small_fractions, small_fractions.filter(bool), max_size=4), small_fractions.filter(bool))
def test_factored_json_round_trip(roots, scalar):
    f = FactoredFunction(roots, scalar)
    assert factored_from_json(factored_to_json(f)) == f


def test_parser_accepts_common_spellings():
    f = parse_rational_function("(x^2 - 1)/(x + 1/2)")
    assert f(Fraction(3)) == Fraction(8, 7) * 2
    assert parse_rational_function("x**2") == parse_rational_function("x*x")
    assert parse_rational_function("-3/4") == Fraction(-3, 4)


@pytest.mark.parametrize("text", ["", "x +", "(x", "y", "x / 0"])
def test_parser_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse_rational_function(text)
