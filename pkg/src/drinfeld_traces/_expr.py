"""Tiny recursive-descent parser for polynomial expressions.

Grammar (whitespace ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (['*'] factor)*        juxtaposition means product
    factor := atom ['^' INT]
    atom   := INT | NAME | '(' expr ')'

The parser is ring-agnostic: a ``Ring`` adaptor supplies constants,
named generators and the arithmetic.
"""

import re

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*^()]))")


class Ring:
    """Callbacks used while evaluating a parsed expression."""

    def const(self, n):
        raise NotImplementedError

    def atom(self, name):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def pow(self, a, e):
        out = self.const(1)
        for _ in range(e):
            out = self.mul(out, a)
        return out


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, ring, source):
        self.toks = tokens
        self.i = 0
        self.ring = ring
        self.src = source

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg):
        raise ParseError(f"{msg} in {self.src!r}")

    def expr(self):
        R = self.ring
        sign = None
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = self.take()[1]
        val = self.term()
        if sign == "-":
            val = R.neg(val)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = R.add(val, rhs) if op == "+" else R.sub(val, rhs)
        return val

    def term(self):
        val = self.factor()
        while True:
            kind, v = self.peek()
            if kind == "op" and v == "*":
                self.take()
                val = self.ring.mul(val, self.factor())
            elif kind in ("int", "name") or (kind, v) == ("op", "("):
                val = self.ring.mul(val, self.factor())
            else:
                return val

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, e = self.take()
            if kind != "int":
                self.fail("exponent must be a non-negative integer")
            return self.ring.pow(base, e)
        return base

    def atom(self):
        kind, v = self.take()
        if kind == "int":
            return self.ring.const(v)
        if kind == "name":
            return self.ring.atom(v)
        if (kind, v) == ("op", "("):
            val = self.expr()
            if self.take() != ("op", ")"):
                self.fail("missing ')'")
            return val
        self.fail("unexpected end of expression" if kind is None else f"unexpected {v!r}")


def evaluate(text, ring):
    """Parse ``text`` and evaluate it in ``ring``."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    p = _Parser(tokens, ring, text)
    val = p.expr()
    if p.i != len(tokens):
        p.fail(f"trailing input {p.peek()[1]!r}")
    return val
