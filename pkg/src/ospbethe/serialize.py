"""Text forms for exact objects and a small expression parser."""

from __future__ import annotations

import re
from fractions import Fraction

from .exactalg import (
    FactoredFunction,
    Polynomial,
    RationalFunction,
    RF_ONE,
    RF_X,
    as_fraction,
    as_rf,
)

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|(x)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list:
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        number, var, op = match.groups()
        if number is not None:
            tokens.append(("num", Fraction(number)))
        elif var is not None:
            tokens.append(("x", None))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while True:
            tok = self.peek()
            if tok in (("op", "*"), ("op", "/")):
                self.take()
                rhs = self.unary()
                value = value * rhs if tok[1] == "*" else value / rhs
            elif tok[0] in ("num", "x") or tok == ("op", "("):
                value = value * self.unary()
            else:
                return value

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num" or val.denominator != 1:
                raise ParseError("exponents must be integers")
            return base ** (sign * int(val))
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return RationalFunction(Polynomial.constant(val))
        if kind == "x":
            return RF_X
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("unbalanced parentheses")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse_rational_function(text: str) -> RationalFunction:
    """Parse expressions like ``"(x^2 - 1)/(x + 1/2)"`` in the variable ``x``."""
    tokens = _tokenize(str(text))
    if not tokens:
        raise ParseError("empty expression")
    parser = _Parser(tokens)
    try:
        value = parser.expr()
    except ZeroDivisionError as exc:
        raise ParseError(f"division by zero in {text!r}") from exc
    if parser.pos != len(tokens):
        raise ParseError(f"trailing input in {text!r}")
    return as_rf(value) if not isinstance(value, RationalFunction) else value


def rf_to_text(f) -> str:
    return str(as_rf(f))


def poly_to_json(p: Polynomial) -> list:
    return p.to_strings()


def poly_from_json(items) -> Polynomial:
    if not isinstance(items, list):
        raise ParseError("polynomial must be a list of coefficient strings")
    return Polynomial(as_fraction(str(c)) for c in items)


def factored_to_json(f: FactoredFunction) -> dict:
    return {"factors": [[str(z), str(mu)] for z, mu in f.roots.items()], "scalar": str(f.scalar)}


def factored_from_json(data) -> FactoredFunction:
    return FactoredFunction.from_pairs(
        ((Fraction(str(z)), Fraction(str(mu))) for z, mu in data["factors"]),
        Fraction(str(data.get("scalar", "1"))),
    )


__all__ = [
    "ParseError",
    "parse_rational_function",
    "rf_to_text",
    "poly_to_json",
    "poly_from_json",
    "factored_to_json",
    "factored_from_json",
    "RF_ONE",
]
