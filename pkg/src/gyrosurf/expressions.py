"""Arithmetic expressions in the chart coordinates x1, x2.

The accepted grammar is deliberately small: floating literals, the two
coordinate names, binary + - * / ^, unary minus, parentheses, and the
functions sin, cos, exp, sqrt.  `^` is right-associative and binds tighter
than unary minus applied to its base (so `-x1^2` is `-(x1^2)`).

Expressions compile to nested closures once, at parse time; evaluation is a
plain call with two floats.
"""

from __future__ import annotations

import math
import re

from .errors import ExpressionError

_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
}

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ExpressionError(f"unexpected character {rest[0]!r} in {text!r}")
        pos = m.end()
        for kind in ("num", "name", "op"):
            val = m.group(kind)
            if val is not None:
                tokens.append((kind, val))
                break
    tokens.append(("end", ""))
    return tokens


class _Parser:
    """Recursive descent over the token list; produces evaluator closures."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ExpressionError(f"expected {op!r} in {self.text!r}, got {val!r}")

    def parse(self):
        fn = self.sum_()
        kind, val = self.peek()
        if kind != "end":
            raise ExpressionError(f"trailing input {val!r} in {self.text!r}")
        return fn

    def sum_(self):
        fn = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                lhs = fn
                if val == "+":
                    fn = lambda x1, x2, a=lhs, b=rhs: a(x1, x2) + b(x1, x2)
                else:
                    fn = lambda x1, x2, a=lhs, b=rhs: a(x1, x2) - b(x1, x2)
            else:
                return fn

    def term(self):
        fn = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                lhs = fn
                if val == "*":
                    fn = lambda x1, x2, a=lhs, b=rhs: a(x1, x2) * b(x1, x2)
                else:
                    fn = lambda x1, x2, a=lhs, b=rhs: a(x1, x2) / b(x1, x2)
            else:
                return fn

    def unary(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            if val == "-":
                return lambda x1, x2, a=inner: -a(x1, x2)
            return inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            # right-associative; exponent may carry its own unary sign
            exponent = self.unary()
            return lambda x1, x2, a=base, b=exponent: a(x1, x2) ** b(x1, x2)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            const = float(val)
            return lambda x1, x2, c=const: c
        if kind == "name":
            if val == "x1":
                return lambda x1, x2: x1
            if val == "x2":
                return lambda x1, x2: x2
            if val in _FUNCTIONS:
                func = _FUNCTIONS[val]
                self.expect_op("(")
                arg = self.sum_()
                self.expect_op(")")
                return lambda x1, x2, f=func, a=arg: f(a(x1, x2))
            raise ExpressionError(f"unknown name {val!r} in {self.text!r}")
        if kind == "op" and val == "(":
            inner = self.sum_()
            self.expect_op(")")
            return inner
        raise ExpressionError(f"unexpected token {val!r} in {self.text!r}")


class Expression:
    """A compiled expression of (x1, x2)."""

    def __init__(self, text: str):
        if not isinstance(text, str) or not text.strip():
            raise ExpressionError("expression must be a non-empty string")
        self.text = text
        self._fn = _Parser(text).parse()

    def __call__(self, x1: float, x2: float) -> float:
        try:
            return float(self._fn(float(x1), float(x2)))
        except (ValueError, OverflowError, ZeroDivisionError) as exc:
            raise ExpressionError(
                f"evaluation of {self.text!r} failed at ({x1}, {x2}): {exc}"
            ) from exc

    def __repr__(self) -> str:
        return f"Expression({self.text!r})"
