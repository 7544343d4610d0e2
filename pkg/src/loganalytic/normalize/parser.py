"""Recursive-descent parser for the germ DSL.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ['^^' rational]
    atom   := 'y' | number | ident | 'log' '(' expr ')'
            | ident '(' expr {',' expr} ')' | '(' expr ')'

Numbers are integers or finite decimals and are read exactly.  The exponent
after ``^^`` is an optionally signed integer, or ``(p/q)`` in parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError
from .ast import Add, Apply, Const, Div, Expr, Log, Mul, Param, Pow, Sub, Y

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?|\.\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\^\^|[-+*/(),]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "op" or "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.tok.pos)
        return self.advance()

    def _end_of_previous(self) -> int:
        t = self.tokens[self.i - 1]
        return t.pos + len(t.text)

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return e

    def expr(self) -> Expr:
        start = self.tok.pos
        e = self.term()
        while self.at("+") or self.at("-"):
            cls = Add if self.advance().text == "+" else Sub
            right = self.term()
            e = cls(e, right, span=(start, self._end_of_previous()))
        return e

    def term(self) -> Expr:
        start = self.tok.pos
        e = self.unary()
        while self.at("*") or self.at("/"):
            cls = Mul if self.advance().text == "*" else Div
            right = self.unary()
            e = cls(e, right, span=(start, self._end_of_previous()))
        return e

    def unary(self) -> Expr:
        if not self.at("-"):
            return self.factor()
        start = self.advance().pos
        inner = self.unary()
        span = (start, self._end_of_previous())
        if isinstance(inner, Const):
            return Const(-inner.value, span=span)
        return Mul(Const(Fraction(-1), span=(start, start + 1)), inner, span=span)

    def factor(self) -> Expr:
        start = self.tok.pos
        base = self.atom()
        if self.at("^^"):
            self.advance()
            exponent = self.rational_exponent()
            return Pow(base, exponent, span=(start, self._end_of_previous()))
        return base

    def rational_exponent(self) -> Fraction:
        if self.at("("):
            self.advance()
            value = self.signed_number()
            if self.at("/"):
                self.advance()
                den_tok = self.tok
                den = self.signed_number()
                if den == 0:
                    raise ParseError("zero denominator in exponent", den_tok.pos)
                value = value / den
            self.expect(")")
            return value
        return self.signed_number()

    def signed_number(self) -> Fraction:
        sign = 1
        while self.at("-") or self.at("+"):
            if self.advance().text == "-":
                sign = -sign
        if self.tok.kind != "num":
            raise ParseError("expected a rational exponent", self.tok.pos)
        return sign * Fraction(self.advance().text)

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Const(Fraction(t.text), span=(t.pos, t.pos + len(t.text)))
        if t.kind == "ident":
            self.advance()
            if t.text == "y":
                if self.at("("):
                    raise ParseError("'y' is the germ variable, not a function", self.tok.pos)
                return Y(span=(t.pos, t.pos + 1))
            if not self.at("("):
                return Param(t.text, span=(t.pos, t.pos + len(t.text)))
            self.advance()
            args = [self.expr()]
            first_comma = None
            while self.at(","):
                if first_comma is None:
                    first_comma = self.tok.pos
                self.advance()
                args.append(self.expr())
            self.expect(")")
            span = (t.pos, self._end_of_previous())
            if t.text == "log":
                if len(args) != 1:
                    raise ParseError("log takes exactly one argument", first_comma)
                return Log(args[0], span=span)
            return Apply(t.text, tuple(args), span=span)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        found = t.text or "end of input"
        raise ParseError(f"unexpected {found!r}", t.pos)


def parse(text: str) -> Expr:
    """Parse DSL text into an expression tree."""
    return Parser(text).parse()
