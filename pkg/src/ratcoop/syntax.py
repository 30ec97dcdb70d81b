"""Tokenizer and recursive-descent parser for algebra expressions.

Grammar (whitespace insignificant)::

    expr    := term (("+" | "-") term)*
    term    := "-" term | [coef ["*"]] factor
    factor  := atom ["@" atom]
    atom    := NAME | "[" expr "," expr "]" | "(" expr ")"
    coef    := INT ["/" INT]

``a@b`` is the tensor ``a (x) b`` where ``a`` names a CDGA basis element.
The parser builds a small AST; evaluation is delegated to the caller.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*/\[\](),@]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Token]:
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = column + pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), column + m.start(kind)))
        pos = m.end()
    return out


# AST nodes: ("name", str) | ("bracket", a, b) | ("sum", [(coef, node)]) | ("tensor", str, node)


class _Parser:
    def __init__(self, text: str, line: int, column: int):
        self.tokens = tokenize(text, line, column)
        self.i = 0
        self.line = line
        self.end_col = column + len(text)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, msg):
        tok = self.peek()
        col = tok.column if tok else self.end_col
        raise ParseError(msg, self.line, col)

    def take(self, text=None, kind=None):
        tok = self.peek()
        if tok is None or (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            want = text or kind
            self.error(f"expected {want!r}" + (f", found {tok.text!r}" if tok else ", found end of input"))
        self.i += 1
        return tok

    def expr(self):
        terms = [self.term(Fraction(1))]
        while self.peek() and self.peek().text in "+-":
            sign = Fraction(1) if self.take().text == "+" else Fraction(-1)
            terms.append(self.term(sign))
        return ("sum", terms)

    def term(self, sign):
        tok = self.peek()
        if tok and tok.text == "-":
            self.take()
            return self.term(-sign)
        if tok and tok.text == "+":
            self.take()
            return self.term(sign)
        coef = Fraction(1)
        if tok and tok.kind == "num":
            nxt = self.tokens[self.i + 1] if self.i + 1 < len(self.tokens) else None
            if nxt is not None and nxt.text == "@":
                return (sign, self.factor())
            num = int(self.take().text)
            den = 1
            if self.peek() and self.peek().text == "/":
                self.take()
                den = int(self.take(kind="num").text)
                if den == 0:
                    self.error("zero denominator")
            coef = Fraction(num, den)
            nxt = self.peek()
            if nxt and nxt.text == "*":
                self.take()
            elif nxt is None or nxt.text in "+-,)]":
                return (sign * coef, ("one",))
        return (sign * coef, self.factor())

    def factor(self):
        left = self.atom()
        if self.peek() and self.peek().text == "@":
            if left[0] != "name":
                self.error("left side of '@' must be a basis name")
            self.take()
            return ("tensor", left[1], self.atom())
        return left

    def atom(self):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of expression")
        if tok.kind == "name":
            self.take()
            return ("name", tok.text, tok.column)
        if tok.kind == "num":
            # bare scalar inside a tensor factor such as 1@u
            self.take()
            return ("name", tok.text, tok.column)
        if tok.text == "[":
            self.take()
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take("]")
            return ("bracket", a, b)
        if tok.text == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        self.error(f"unexpected token {tok.text!r}")


def parse_expression(text: str, line: int = 1, column: int = 1):
    p = _Parser(text, line, column)
    if not p.tokens:
        raise ParseError("empty expression", line, column)
    node = p.expr()
    if p.peek() is not None:
        p.error(f"unexpected token {p.peek().text!r}")
    return node


def evaluate(node, *, name, bracket, zero, tensor=None, one=None):
    """Fold an AST with caller-supplied semantics."""
    kind = node[0]
    if kind == "name":
        return name(node[1], node[2])
    if kind == "bracket":
        return bracket(evaluate(node[1], name=name, bracket=bracket, zero=zero, tensor=tensor, one=one),
                       evaluate(node[2], name=name, bracket=bracket, zero=zero, tensor=tensor, one=one))
    if kind == "tensor":
        if tensor is None:
            raise ParseError("tensor '@' not allowed here", 1, node[2][2] if node[2][0] == "name" else 1)
        return tensor(node[1], evaluate(node[2], name=name, bracket=bracket, zero=zero, tensor=tensor, one=one))
    if kind == "one":
        if one is None:
            raise ParseError("bare scalar not allowed here")
        return one()
    if kind == "sum":
        acc = zero()
        for coef, sub in node[1]:
            acc = acc + coef * evaluate(sub, name=name, bracket=bracket, zero=zero, tensor=tensor, one=one)
        return acc
    raise AssertionError(kind)
