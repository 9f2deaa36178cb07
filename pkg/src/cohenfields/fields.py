"""Exact arithmetic for F_p and for the perfect closure of F_p(t).

Two coefficient domains live here:

* ``GF(p)`` -- the prime field.  Elements are plain Python ints in
  ``[0, p)``; the context object mediates all arithmetic so the elements
  stay lightweight.

* ``PerfClosure(p)`` -- the union of the fields F_p(t^(1/p^m)) over all
  levels m.  An element is a reduced rational function num/den in the
  symbol u = t^(1/p^m), stored at its minimal ("canonical") level: except
  at level 0, num and den are never simultaneously polynomials in u^p.
  The denominator is monic and coprime to the numerator, which makes the
  representation a normal form, so equality is structural.

The prime p never lives on elements; it is carried by the context, and
all operations are pure functions of their inputs plus that context.
"""

from __future__ import annotations

from . import _kernels as K
from .errors import DivisionByZero


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class GF:
    """Arithmetic context for the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p):
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero(f"inverse of 0 in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def frobenius(self, a):
        return a % self.p  # Fermat: a^p = a

    def pth_root(self, a):
        return a % self.p

    def render(self, a):
        return str(a % self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class PerfClosureElem:
    """Element of the perfect-closure tower, in canonical form.

    ``num``/``den`` are dense F_p coefficient tuples in u = t^(1/p^level).
    Instances are immutable and produced only by a :class:`PerfClosure`
    context, which guarantees the normal-form invariants.
    """

    __slots__ = ("level", "num", "den")

    def __init__(self, level, num, den):
        self.level = level
        self.num = num
        self.den = den

    def is_zero(self):
        return not self.num

    def __eq__(self, other):
        return (isinstance(other, PerfClosureElem)
                and self.level == other.level
                and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        return hash((self.level, self.num, self.den))

    def __repr__(self):
        return f"PerfClosureElem(level={self.level}, num={self.num}, den={self.den})"


class PerfClosure:
    """Arithmetic context for the perfect closure of F_p(t)."""

    __slots__ = ("p", "gf")

    def __init__(self, p):
        self.gf = GF(p)
        self.p = p

    # -- construction -------------------------------------------------

    def make(self, level, num, den):
        """Normalize (reduce, monicize, minimize the level) and wrap."""
        p = self.p
        num = K.pstrip(list(num))
        den = K.pstrip(list(den))
        if not den:
            raise DivisionByZero("zero denominator in tower element")
        if not num:
            return PerfClosureElem(0, (), (1,))
        g = K.pgcd(num, den, p)
        if len(g) > 1:
            num = K.pdivmod(num, g, p)[0]
            den = K.pdivmod(den, g, p)[0]
        if den[-1] != 1:
            c = pow(den[-1], p - 2, p)
            num = K.pscale(num, c, p)
            den = K.pscale(den, c, p)
        while level > 0 and K.pis_dilated(num, p) and K.pis_dilated(den, p):
            num = K.pcontract(num, p)
            den = K.pcontract(den, p)
            level -= 1
        return PerfClosureElem(level, tuple(num), tuple(den))

    def zero(self):
        return PerfClosureElem(0, (), (1,))

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        n %= self.p
        if n == 0:
            return self.zero()
        return PerfClosureElem(0, (n,), (1,))

    def t_root(self, m):
        """The tower generator t^(1/p^m)."""
        return self.make(m, (0, 1), (1,))

    def t(self):
        return self.t_root(0)

    # -- arithmetic ----------------------------------------------------

    def _lift(self, a, level):
        j = level - a.level
        if j == 0:
            return a.num, a.den
        k = self.p ** j
        return K.pdilate(a.num, k), K.pdilate(a.den, k)

    def add(self, a, b):
        level = max(a.level, b.level)
        an, ad = self._lift(a, level)
        bn, bd = self._lift(b, level)
        p = self.p
        num = K.padd(K.pmul(an, bd, p), K.pmul(bn, ad, p), p)
        return self.make(level, num, K.pmul(ad, bd, p))

    def neg(self, a):
        return PerfClosureElem(a.level, tuple(K.pneg(a.num, self.p)), a.den)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        level = max(a.level, b.level)
        an, ad = self._lift(a, level)
        bn, bd = self._lift(b, level)
        p = self.p
        return self.make(level, K.pmul(an, bn, p), K.pmul(ad, bd, p))

    def inv(self, a):
        if a.is_zero():
            raise DivisionByZero("inverse of 0 in the tower field")
        return self.make(a.level, a.den, a.num)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return a == b

    def frobenius(self, a):
        """a -> a^p; the level never goes up."""
        if a.is_zero():
            return a
        if a.level > 0:
            # f(u_m)^p = f(u_{m-1}) coefficientwise over F_p
            return self.make(a.level - 1, a.num, a.den)
        p = self.p
        return self.make(0, K.pdilate(list(a.num), p), K.pdilate(list(a.den), p))

    def pth_root(self, a):
        """The unique p-th root; level goes up by at most one."""
        if a.is_zero():
            return a
        return self.make(a.level + 1, a.num, a.den)

    # -- display -------------------------------------------------------

    def render(self, a):
        if a.is_zero():
            return "0"
        num = _render_tower_poly(a.num, a.level, self.p)
        if a.den == (1,):
            return num
        den = _render_tower_poly(a.den, a.level, self.p)
        return f"({num})/({den})"

    def __repr__(self):
        return f"PerfClosure({self.p})"

    def __eq__(self, other):
        return isinstance(other, PerfClosure) and other.p == self.p

    def __hash__(self):
        return hash(("PerfClosure", self.p))


def _render_tower_exponent(i, level, p):
    q = p ** level
    from math import gcd
    g = gcd(i, q)
    i, q = i // g, q // g
    if q == 1:
        return "t" if i == 1 else f"t^{i}"
    return f"t^({i}/{q})"


def _render_tower_poly(coeffs, level, p):
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            var = _render_tower_exponent(i, level, p)
            parts.append(var if c == 1 else f"{c}*{var}")
    return " + ".join(parts) if parts else "0"
