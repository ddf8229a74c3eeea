"""Polynomial expressions such as ``1 - (z1+z2)/2`` or ``(1-z1)^2 + 0.5i*z2``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | NUMBER 'i' | 'i' | 'z' INT | '(' expr ')'

Division is only allowed by a nonzero constant.
"""

from __future__ import annotations

import re

from .series import SparsePoly

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?"
    r"|(?P<var>z(?P<idx>\d+))|(?P<unit>i(?![A-Za-z0-9_]))|(?P<op>[-+*/^()]))"
)


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("num") is not None:
            value = float(m.group("num"))
            tokens.append(("num", complex(0, value) if m.group("imag") else complex(value), start))
        elif m.group("var") is not None:
            idx = int(m.group("idx"))
            if idx < 1:
                raise PolyParseError("variables are numbered from z1", start, text)
            tokens.append(("var", idx, start))
        elif m.group("unit") is not None:
            tokens.append(("num", 1j, start))
        else:
            tokens.append((m.group("op"), None, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, dimension: int):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = dimension

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(self.text[tok[2]])
            raise PolyParseError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise PolyParseError(message, tok[2], self.text)

    def parse(self) -> SparsePoly:
        out = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return out

    def expr(self):
        acc = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[0] in ("*", "/"):
            op_tok = self.take()
            rhs = self.unary()
            if op_tok[0] == "*":
                acc = acc * rhs
                continue
            if rhs.total_degree > 0:
                self.fail("division by a polynomial is not supported", op_tok)
            c = rhs.constant_term
            if c == 0:
                self.fail("division by zero", op_tok)
            acc = acc / c
        return acc

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("num")
            k = tok[1]
            if k.imag != 0 or k.real != int(k.real) or k.real < 0:
                self.fail("exponent must be a nonnegative integer", tok)
            base = base ** int(k.real)
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return SparsePoly.constant(tok[1], self.n)
        if tok[0] == "var":
            self.take()
            if tok[1] > self.n:
                self.fail(f"z{tok[1]} exceeds dimension {self.n}", tok)
            return SparsePoly.variable(tok[1] - 1, self.n)
        if tok[0] == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        self.fail("expected a number, variable or '('")


def parse_poly(text: str, dimension: int | None = None) -> SparsePoly:
    """Expand ``text`` into a :class:`SparsePoly`.

    The dimension defaults to the largest variable index that occurs (at least 1).
    """
    tokens = _tokenize(text)
    used = max((t[1] for t in tokens if t[0] == "var"), default=1)
    n = used if dimension is None else dimension
    if n < 1:
        raise ValueError("dimension must be positive")
    return _Parser(text, n).parse()
