"""Recursive-descent parser for the expression language.

Grammar (lowest to highest precedence)::

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('-' | '+') unary | power
    power    := primary ('^' exponent)*
    exponent := ('-' | '+') exponent | primary      # must not depend on t
    primary  := NUMBER | 't' | 'pi' | 'e' | NAME '(' expr ')' | '(' expr ')'

All binary operators are left associative.
"""
from __future__ import annotations

import math
import re
from typing import NamedTuple

from ..errors import ExprSyntaxError
from .nodes import FUNCTIONS, T, Expr, add, const, div, func, mul, neg, power, sub

CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str  # "num", "name", "op" or "end"
    text: str
    offset: int


def _byte_offset(src: str, index: int) -> int:
    return len(src[:index].encode("utf-8"))


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", _byte_offset(src, pos), src)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), _byte_offset(src, pos)))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(src, len(src))))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        if tok.kind == "end":
            message = f"{message}: unexpected end of input"
        else:
            message = f"{message}: unexpected {tok.text!r}"
        raise ExprSyntaxError(message, tok.offset, self.src)

    def expect(self, text: str):
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        self.error(f"expected {text!r}")

    def parse(self) -> Expr:
        result = self.expr()
        if self.tok.kind != "end":
            self.error("expected operator or end of input")
        return result

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            right = self.term()
            left = add(left, right) if op == "+" else sub(left, right)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            right = self.unary()
            left = mul(left, right) if op == "*" else div(left, right)
        return left

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            operand = self.unary()
            return neg(operand) if op == "-" else operand
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        while self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            start = self.tok
            exponent = self.exponent()
            if not exponent.is_constant:
                raise ExprSyntaxError("exponent of '^' must not depend on t", start.offset, self.src)
            base = power(base, exponent(0.0))
        return base

    def exponent(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            operand = self.exponent()
            return neg(operand) if op == "-" else operand
        return self.primary()

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return const(float(tok.text))
        if tok.kind == "name":
            self.advance()
            name = tok.text
            if name == "t":
                return T
            if name in CONSTANTS:
                return const(CONSTANTS[name])
            if name in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return func(name, arg)
            raise ExprSyntaxError(f"unknown name {name!r}", tok.offset, self.src)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        self.error("expected a number, name or '('")


def parse(src: str) -> Expr:
    """Parse expression text into a tree.

    Raises
    ------
    ExprSyntaxError
        With the byte offset of the offending token.
    """
    if not isinstance(src, str):
        raise TypeError(f"expression source must be str, got {type(src).__name__}")
    return _Parser(src).parse()
