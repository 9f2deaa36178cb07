"""Text grammars for series, Laurent series, tower elements, and
generators mixing t with X.

Common expression syntax: integer literals, named atoms, ``+ - * / ^``,
parentheses, unary minus.  Exponents are integers (Laurent input may use
negative ones on X) or parenthesized fractions ``(a/b)``, which only
tower elements accept (b must be a power of p).  What an expression may
contain is decided by the evaluator:

* ``parse_series``      -- variables ``X`` or ``X1..Xn``, no division.
* ``parse_laurent``     -- single variable ``X``, negative powers allowed.
* ``parse_tower``       -- ``t`` and ``t^(1/p^m)``, full field operations.
* ``parse_tower_poly``  -- ``t`` and ``X``, polynomial operations only;
  returns the t-coefficient list.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import AlgebraError
from .residue import LaurentSeries
from .series import TruncSeries

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]\w*)|(\^|\+|\-|\*|/|\(|\)))")


class ParseError(AlgebraError):
    pass


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected input at: {text[pos:]!r}")
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", op))
        pos = m.end()
    return out


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

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}")

    def parse(self):
        node = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError("trailing input after expression")
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                node = (("add" if val == "+" else "sub"), node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                node = (("mul" if val == "*" else "div"), node, rhs)
            else:
                return node

    def factor(self):
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return ("neg", self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return ("pow", base, self.exponent())
        return base

    def exponent(self):
        kind, val = self.peek()
        if kind == "int":
            self.take()
            return val
        if kind == "op" and val == "-":
            self.take()
            kind, val = self.take()
            if kind != "int":
                raise ParseError("expected an integer after '^-'")
            return -val
        if kind == "op" and val == "(":
            self.take()
            kind, num = self.take()
            if kind != "int":
                k2, v2 = kind, num
                if k2 == "op" and v2 == "-":
                    kind, num = self.take()
                    if kind != "int":
                        raise ParseError("expected an integer numerator")
                    num = -num
                else:
                    raise ParseError("expected an integer numerator")
            nxt = self.take()
            if nxt == ("op", ")"):
                return num
            if nxt != ("op", "/"):
                raise ParseError("expected '/' in a fractional exponent")
            kind, den = self.take()
            if kind != "int":
                raise ParseError("expected an integer denominator")
            self.expect_op(")")
            return Fraction(num, den)
        raise ParseError("expected an exponent")

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return ("int", val)
        if kind == "name":
            return ("var", val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {val!r}")


def _eval(node, ev):
    op = node[0]
    if op == "int":
        return ev.const(node[1])
    if op == "var":
        return ev.var(node[1])
    if op == "neg":
        return ev.neg(_eval(node[1], ev))
    if op == "add":
        return ev.add(_eval(node[1], ev), _eval(node[2], ev))
    if op == "sub":
        return ev.add(_eval(node[1], ev), ev.neg(_eval(node[2], ev)))
    if op == "mul":
        return ev.mul(_eval(node[1], ev), _eval(node[2], ev))
    if op == "div":
        return ev.div(_eval(node[1], ev), _eval(node[2], ev))
    if op == "pow":
        return ev.pow(_eval(node[1], ev), node[2])
    raise ParseError(f"unknown node {op}")  # pragma: no cover


def scan_nvars(text):
    """Largest X-index mentioned (X counts as X1); 0 when no variable occurs."""
    n = 0
    for kind, val in _tokenize(text):
        if kind == "name":
            if val == "X":
                n = max(n, 1)
            elif re.fullmatch(r"X\d+", val):
                n = max(n, int(val[1:]))
    return n


class _SeriesEval:
    def __init__(self, ring, nvars, prec):
        self.ring = ring
        self.nvars = nvars
        self.prec = prec

    def const(self, v):
        return TruncSeries.constant(self.ring, self.nvars, self.ring.from_int(v),
                                    prec=self.prec)

    def var(self, name):
        if name == "X" and self.nvars >= 1:
            return TruncSeries.variable(self.ring, self.nvars, 0, prec=self.prec)
        m = re.fullmatch(r"X(\d+)", name)
        if m and 1 <= int(m.group(1)) <= self.nvars:
            return TruncSeries.variable(self.ring, self.nvars,
                                        int(m.group(1)) - 1, prec=self.prec)
        raise ParseError(f"unknown variable {name!r} (have {self.nvars})")

    def neg(self, a):
        return -a

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        raise ParseError("division is not part of the series grammar")

    def pow(self, a, e):
        if isinstance(e, Fraction) or e < 0:
            raise ParseError("series exponents must be non-negative integers")
        return a ** e


def parse_series(text, ring, nvars=None, prec=None):
    from .series import EXACT

    if nvars is None:
        nvars = max(1, scan_nvars(text))
    ev = _SeriesEval(ring, nvars, EXACT if prec is None else prec)
    return _eval(_Parser(_tokenize(text)).parse(), ev)


class _LaurentEval:
    def __init__(self, p, prec):
        self.p = p
        self.prec = prec

    def const(self, v):
        v %= self.p
        if v == 0:
            return LaurentSeries.exact_zero(self.p)
        return LaurentSeries.from_int(self.p, v, self.prec)

    def var(self, name):
        if name != "X":
            raise ParseError("Laurent input uses the single variable X")
        return LaurentSeries.x_power(self.p, 1, self.prec)

    def neg(self, a):
        return -a

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        raise ParseError("use negative powers instead of division")

    def pow(self, a, e):
        if isinstance(e, Fraction):
            raise ParseError("Laurent exponents are integers")
        if e < 0:
            a = a.inv()
            e = -e
        out = LaurentSeries.one(self.p, self.prec)
        for _ in range(e):
            out = out * a
        return out


def parse_laurent(text, p, prec=32):
    return _eval(_Parser(_tokenize(text)).parse(), _LaurentEval(p, prec))


class _TowerEval:
    def __init__(self, pc):
        self.pc = pc

    def const(self, v):
        return self.pc.from_int(v)

    def var(self, name):
        if name != "t":
            raise ParseError("tower elements use the single symbol t")
        return self.pc.t()

    def neg(self, a):
        return self.pc.neg(a)

    def add(self, a, b):
        return self.pc.add(a, b)

    def mul(self, a, b):
        return self.pc.mul(a, b)

    def div(self, a, b):
        return self.pc.div(a, b)

    def pow(self, a, e):
        pc = self.pc
        if isinstance(e, Fraction):
            num, den = e.numerator, e.denominator
            m = 0
            while den > 1 and den % pc.p == 0:
                den //= pc.p
                m += 1
            if den != 1:
                raise ParseError("tower exponent denominators must be powers of p")
        else:
            num, m = e, 0
        if num < 0:
            a = pc.inv(a)
            num = -num
        out = pc.one()
        for _ in range(num):
            out = pc.mul(out, a)
        for _ in range(m):
            out = pc.pth_root(out)
        return out


def parse_tower(text, pc):
    return _eval(_Parser(_tokenize(text)).parse(), _TowerEval(pc))


class _TowerPolyEval:
    """Evaluates into dicts {t-degree: univariate series in X}."""

    def __init__(self, ring, prec):
        self.ring = ring
        self.prec = prec

    def _wrap(self, series):
        return {0: series}

    def const(self, v):
        return self._wrap(TruncSeries.constant(self.ring, 1, self.ring.from_int(v),
                                               prec=self.prec))

    def var(self, name):
        if name == "X":
            return self._wrap(TruncSeries.variable(self.ring, 1, 0, prec=self.prec))
        if name == "t":
            return {1: TruncSeries.one(self.ring, 1, self.prec)}
        raise ParseError("generators are polynomials in t and X")

    def neg(self, a):
        return {k: -v for k, v in a.items()}

    def add(self, a, b):
        out = dict(a)
        for k, v in b.items():
            out[k] = out[k] + v if k in out else v
        return {k: v for k, v in out.items() if not v.is_zero()}

    def mul(self, a, b):
        out = {}
        for i, u in a.items():
            for j, v in b.items():
                w = u * v
                k = i + j
                out[k] = out[k] + w if k in out else w
        return {k: v for k, v in out.items() if not v.is_zero()}

    def div(self, a, b):
        raise ParseError("generators do not support division")

    def pow(self, a, e):
        if isinstance(e, Fraction) or e < 0:
            raise ParseError("generator exponents must be non-negative integers")
        out = self.const(1)
        for _ in range(e):
            out = self.mul(out, a)
        return out


def parse_tower_poly(text, ring, prec=None):
    """Parse a generator in t and X into its t-coefficient list."""
    from .series import EXACT

    ev = _TowerPolyEval(ring, EXACT if prec is None else prec)
    table = _eval(_Parser(_tokenize(text)).parse(), ev)
    if not table:
        return [TruncSeries.zero(ring, 1)]
    top = max(table)
    return [table.get(k, TruncSeries.zero(ring, 1)) for k in range(top + 1)]
