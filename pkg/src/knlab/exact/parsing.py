"""Parse rational-function text such as ``"1/(z-1)^2 + 3/2*z"``."""
import re

from .rational import ONE_FUNCTION, RationalFunction, Z
from .scalar import mpq

_TOKEN = re.compile(r"\s*(?:(\d+)|(z)|(\*\*|[-+*/^()]))")


def parse_rational_function(text):
    tokens = _tokenize(text)
    parser = _Parser(tokens, text)
    value = parser.expr()
    if parser.pos != len(tokens):
        raise ValueError(f"unexpected {tokens[parser.pos][1]!r} in {text!r}")
    return value


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse {text!r} at column {pos + 1}")
        if m.group(1):
            out.append(("num", m.group(1)))
        elif m.group(2):
            out.append(("z", "z"))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.text = text
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            kind, tok = self.take() if self.pos < len(self.tokens) else (None, None)
            if kind != "num":
                raise ValueError(f"integer exponent expected in {self.text!r}")
            return base ** (sign * int(tok))
        return base

    def atom(self):
        if self.pos >= len(self.tokens):
            raise ValueError(f"unexpected end of {self.text!r}")
        kind, tok = self.take()
        if kind == "num":
            return RationalFunction.constant(mpq(int(tok)))
        if kind == "z":
            return Z
        if tok == "(":
            value = self.expr()
            if self.peek() != ")":
                raise ValueError(f"missing ')' in {self.text!r}")
            self.take()
            return value
        raise ValueError(f"unexpected {tok!r} in {self.text!r}")


__all__ = ["parse_rational_function", "ONE_FUNCTION"]
