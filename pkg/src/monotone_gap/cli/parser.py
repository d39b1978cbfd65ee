"""Recursive-descent parser for function expressions.

    expr := "g(" INT ")" | "pow(" INT ")" | "poly(" RAT {"," RAT} ")"
          | "mobius(" RAT "," RAT "," RAT "," RAT ")" | "affine(" RAT "," RAT ")"
          | "compose(" expr "," expr ")" | "mul(" expr "," expr ")"
          | "bendat(" expr "," RAT ")"
    RAT  := INT | INT "/" POSINT

Whitespace is allowed between tokens.  Errors carry the byte offset of
the offending token in the UTF-8 encoding of the input.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import DomainError, InvalidArgument, ParseError
from ..exactpoly import Poly, gn_poly
from ..expr import Affine, BendatSherman, Compose, FunctionExpr, Mobius, Mul

_INT = re.compile(r"[+-]?\d+")
_NAME = re.compile(r"[A-Za-z_]+")

MAX_DEGREE = 200
_NAMES = ("g", "pow", "poly", "mobius", "affine", "compose", "mul", "bendat")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def offset(self, pos=None) -> int:
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode("utf-8"))

    def fail(self, message, pos=None):
        raise ParseError(message, self.offset(pos))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str):
        self.skip()
        if not self.text.startswith(ch, self.pos):
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            self.fail(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def peek(self, ch: str) -> bool:
        self.skip()
        return self.text.startswith(ch, self.pos)

    def integer(self) -> int:
        self.skip()
        m = _INT.match(self.text, self.pos)
        if not m:
            self.fail("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def rational(self) -> Fraction:
        num = self.integer()
        if self.peek("/"):
            self.pos += 1
            self.skip()
            den_pos = self.pos
            den = self.integer()
            if den <= 0 or self.text[den_pos] in "+-":
                self.fail("denominator must be a positive integer", den_pos)
            return Fraction(num, den)
        return Fraction(num)

    def expr(self) -> FunctionExpr:
        self.skip()
        start = self.pos
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.fail("expected a function name")
        name = m.group()
        if name not in _NAMES:
            self.fail(f"unknown function {name!r}", start)
        self.pos = m.end()
        self.expect("(")
        try:
            node = self.body(name, start)
        except ParseError:
            raise
        except (InvalidArgument, DomainError, ZeroDivisionError) as exc:
            raise ParseError(f"invalid {name}(...): {exc}", self.offset(start)) from None
        self.expect(")")
        return node

    def body(self, name: str, start: int) -> FunctionExpr:
        if name == "g":
            pos = self.pos
            n = self.integer()
            if n < 1:
                self.fail("g(n) needs n >= 1", pos)
            return gn_poly(n)
        if name == "pow":
            pos = self.pos
            k = self.integer()
            if not 0 <= k <= MAX_DEGREE:
                self.fail(f"pow(k) needs 0 <= k <= {MAX_DEGREE}", pos)
            return Poly([0] * k + [1])
        if name == "poly":
            coeffs = [self.rational()]
            while self.peek(","):
                self.pos += 1
                coeffs.append(self.rational())
            return Poly(coeffs)
        if name == "mobius":
            a = self.rational()
            rest = []
            for _ in range(3):
                self.expect(",")
                rest.append(self.rational())
            return Mobius(a, *rest)
        if name == "affine":
            c = self.rational()
            self.expect(",")
            return Affine(c, self.rational())
        if name in ("compose", "mul"):
            left = self.expr()
            self.expect(",")
            right = self.expr()
            return Compose(left, right) if name == "compose" else Mul(left, right)
        if name == "bendat":
            f = self.expr()
            self.expect(",")
            return BendatSherman(f, self.rational())
        raise AssertionError(name)


def parse_function(spec: str) -> FunctionExpr:
    p = _Parser(spec)
    node = p.expr()
    p.skip()
    if p.pos != len(spec):
        p.fail("unexpected trailing input")
    return node


def parse_rational(text: str) -> Fraction:
    p = _Parser(text)
    value = p.rational()
    p.skip()
    if p.pos != len(text):
        p.fail("unexpected trailing input")
    return value


def parse_rational_list(text: str) -> list[Fraction]:
    p = _Parser(text)
    out = [p.rational()]
    while p.peek(","):
        p.pos += 1
        out.append(p.rational())
    p.skip()
    if p.pos != len(text):
        p.fail("expected ',' or end of input")
    return out
