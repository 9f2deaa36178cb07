"""Sparse truncated multivariate power series with divided-power Taylor maps.

A :class:`TruncSeries` is a finite map from exponent vectors (tuples of
naturals) to nonzero coefficients, together with a total-degree truncation
bound ``prec``: the series is certified on all terms of total degree
strictly below ``prec``, and stores nothing at or above it.  Arithmetic
propagates ``prec`` as the minimum over the operands.  Exact polynomials
use the sentinel bound :data:`EXACT`.

Coefficients live in any field context exposing the small protocol used
throughout this package (``zero/one/from_int/add/sub/neg/mul/inv/is_zero/
eq`` plus the characteristic ``p``): ints mediated by ``GF``, tower
elements mediated by ``PerfClosure``, residue-field elements mediated by
their field context.

The Taylor coefficient maps ``delta`` are defined through the formal
shift: the component of multi-index alpha sends X^beta to
binom(beta, alpha) * X^(beta-alpha), with the binomials taken mod p via
Lucas' theorem.  Fixing one variable and letting the order run gives a
Hasse-Schmidt derivation in each variable.
"""

from __future__ import annotations

import itertools

from ._kernels import conv_mod_p
from .errors import (
    DimensionMismatch,
    NotAPthPower,
    NotAUnit,
    PrecisionTooLow,
    SubstitutionNotLocal,
)
from .fields import GF

#: Precision sentinel for exact polynomials (larger than any real bound).
EXACT = 2 ** 30

INF = float("inf")


def binom_mod(n, k, p):
    """binom(n, k) mod p by Lucas' theorem (never via integer factorials)."""
    if k < 0 or k > n:
        return 0
    r = 1
    while k:
        r = r * _SMALL_BINOM(n % p, k % p) % p
        if r == 0:
            return 0
        n //= p
        k //= p
    return r


def _SMALL_BINOM(a, b):
    if b > a:
        return 0
    r = 1
    for i in range(b):
        r = r * (a - i) // (i + 1)
    return r


def multi_binom_mod(beta, alpha, p):
    """Product of per-coordinate binomials mod p."""
    r = 1
    for b, a in zip(beta, alpha):
        r = r * binom_mod(b, a, p) % p
        if r == 0:
            return 0
    return r


def grlex_key(alpha):
    return (sum(alpha), alpha)


def _same_ring(r1, r2):
    return r1 is r2 or r1 == r2


class TruncSeries:
    """Immutable sparse series truncated at a total-degree bound."""

    __slots__ = ("ring", "nvars", "prec", "terms")

    def __init__(self, ring, nvars, prec, terms):
        if nvars < 1:
            raise DimensionMismatch("need at least one variable")
        if prec < 1:
            raise PrecisionTooLow("precision bound must be >= 1")
        clean = {}
        for alpha, c in terms.items():
            if sum(alpha) < prec and not ring.is_zero(c):
                clean[alpha] = c
        self.ring = ring
        self.nvars = nvars
        self.prec = prec
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, ring, nvars, prec=EXACT):
        return cls(ring, nvars, prec, {})

    @classmethod
    def constant(cls, ring, nvars, c, prec=EXACT):
        return cls(ring, nvars, prec, {(0,) * nvars: c})

    @classmethod
    def one(cls, ring, nvars, prec=EXACT):
        return cls.constant(ring, nvars, ring.one(), prec)

    @classmethod
    def monomial(cls, ring, nvars, alpha, c=None, prec=EXACT):
        if c is None:
            c = ring.one()
        return cls(ring, nvars, prec, {tuple(alpha): c})

    @classmethod
    def variable(cls, ring, nvars, j, prec=EXACT):
        alpha = [0] * nvars
        alpha[j] = 1
        return cls.monomial(ring, nvars, alpha, prec=prec)

    # -- inspection -------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def coeff(self, alpha):
        return self.terms.get(tuple(alpha), self.ring.zero())

    def constant_term(self):
        return self.coeff((0,) * self.nvars)

    def order(self):
        """Minimal total degree of a stored term; INF for the zero series."""
        if not self.terms:
            return INF
        return min(sum(a) for a in self.terms)

    def degree(self):
        """Maximal total degree of a stored term; -1 for the zero series."""
        if not self.terms:
            return -1
        return max(sum(a) for a in self.terms)

    def support(self):
        return sorted(self.terms, key=grlex_key)

    def is_exact(self):
        return self.prec >= EXACT

    # -- ring operations ---------------------------------------------------

    def _check_compatible(self, other):
        if not isinstance(other, TruncSeries):
            raise DimensionMismatch("expected a TruncSeries operand")
        if other.nvars != self.nvars or not _same_ring(self.ring, other.ring):
            raise DimensionMismatch("operands live in different series rings")

    def __add__(self, other):
        self._check_compatible(other)
        ring = self.ring
        out = dict(self.terms)
        for a, c in other.terms.items():
            if a in out:
                out[a] = ring.add(out[a], c)
            else:
                out[a] = c
        return TruncSeries(ring, self.nvars, min(self.prec, other.prec), out)

    def __neg__(self):
        ring = self.ring
        return TruncSeries(ring, self.nvars, self.prec,
                           {a: ring.neg(c) for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        ring = self.ring
        return TruncSeries(ring, self.nvars, self.prec,
                           {a: ring.mul(c, v) for a, v in self.terms.items()})

    def scale_int(self, m):
        return self.scale(self.ring.from_int(m))

    def __mul__(self, other):
        self._check_compatible(other)
        prec = min(self.prec, other.prec)
        ring = self.ring
        if self.nvars == 1:
            fast = _mul_univariate(self, other, prec)
            if fast is not None:
                return fast
        if len(self.terms) > len(other.terms):
            return other.__mul__(self)
        out = {}
        rows = [(b, sum(b), cb) for b, cb in other.terms.items()]
        for a, ca in self.terms.items():
            da = sum(a)
            if da >= prec:
                continue
            for b, db, cb in rows:
                if da + db >= prec:
                    continue
                key = tuple(x + y for x, y in zip(a, b))
                c = ring.mul(ca, cb)
                if key in out:
                    out[key] = ring.add(out[key], c)
                else:
                    out[key] = c
        return TruncSeries(ring, self.nvars, prec, out)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a series; use invert()")
        result = TruncSeries.one(self.ring, self.nvars, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if other.nvars != self.nvars or not _same_ring(self.ring, other.ring):
            return False
        k = min(self.prec, other.prec)
        ring = self.ring
        for a in set(self.terms) | set(other.terms):
            if sum(a) >= k:
                continue
            if not ring.eq(self.terms.get(a, ring.zero()),
                           other.terms.get(a, ring.zero())):
                return False
        return True

    __hash__ = None

    # -- precision management ----------------------------------------------

    def truncate(self, prec):
        """Restrict the certified bound (never raises it)."""
        prec = min(self.prec, prec)
        if prec == self.prec:
            return self
        return TruncSeries(self.ring, self.nvars, prec, self.terms)

    def _with_prec(self, prec):
        # Caller certifies the extra digits (Newton-style lifts only).
        if prec <= self.prec:
            return self.truncate(prec)
        return TruncSeries(self.ring, self.nvars, prec, self.terms)

    # -- Taylor / Hasse-Schmidt maps -----------------------------------------

    def delta(self, alpha):
        """Taylor coefficient map of multi-index ``alpha``.

        Terms of degree >= prec - |alpha| in the output are certified only
        up to the input truncation; start from inflated precision when the
        full output window matters.
        """
        alpha = tuple(alpha)
        if len(alpha) != self.nvars:
            raise DimensionMismatch("multi-index length mismatch")
        ring = self.ring
        p = ring.p
        out = {}
        for beta, c in self.terms.items():
            if any(b < a for b, a in zip(beta, alpha)):
                continue
            m = multi_binom_mod(beta, alpha, p)
            if m == 0:
                continue
            key = tuple(b - a for b, a in zip(beta, alpha))
            out[key] = c if m == 1 else ring.mul(ring.from_int(m), c)
        return TruncSeries(ring, self.nvars, self.prec, out)

    def delta_var(self, j, i):
        """Order-``i`` Hasse-Schmidt component in variable ``j`` (0-based)."""
        alpha = [0] * self.nvars
        alpha[j] = i
        return self.delta(alpha)

    # -- substitution ----------------------------------------------------------

    def substitute(self, gs):
        """Evaluate at g_1..g_n; every g_j must have order >= 1."""
        gs = list(gs)
        if len(gs) != self.nvars:
            raise DimensionMismatch("need one series per variable")
        nv = gs[0].nvars
        ring = self.ring
        prec = self.prec
        for g in gs:
            if g.nvars != nv or not _same_ring(g.ring, ring):
                raise DimensionMismatch("substituted series live in different rings")
            if g.order() < 1:
                raise SubstitutionNotLocal("substituted series has a constant term")
            prec = min(prec, g.prec)
        pows = [[TruncSeries.one(ring, nv, prec)] for _ in range(self.nvars)]

        def power(j, e):
            cache = pows[j]
            while len(cache) <= e:
                cache.append((cache[-1] * gs[j]).truncate(prec))
            return cache[e]

        acc = TruncSeries.zero(ring, nv, prec)
        for alpha in sorted(self.terms, key=grlex_key):
            if sum(alpha) >= prec:
                continue
            term = TruncSeries.constant(ring, nv, self.terms[alpha], prec)
            for j, e in enumerate(alpha):
                if e:
                    term = term * power(j, e)
            acc = acc + term
        return acc

    # -- inversion ------------------------------------------------------------

    def invert(self):
        """Inverse of a unit, exact modulo the truncation bound."""
        ring = self.ring
        c0 = self.constant_term()
        if ring.is_zero(c0):
            raise NotAUnit("series has no constant term")
        inv0 = ring.inv(c0)
        if len(self.terms) == 1:
            return TruncSeries.constant(ring, self.nvars, inv0, self.prec)
        if self.is_exact():
            raise PrecisionTooLow(
                "cannot invert a non-constant unit at EXACT precision; truncate() first")
        prec = self.prec
        x = TruncSeries.constant(ring, self.nvars, inv0, 1)
        k = 1
        while k < prec:
            k = min(2 * k, prec)
            xk = x._with_prec(k)
            fk = self.truncate(k)
            err = TruncSeries.one(ring, self.nvars, k) - fk * xk
            x = xk + xk * err
        return x

    # -- p-th roots -------------------------------------------------------------

    def pth_root(self):
        """The series whose p-th power equals this one on stored terms."""
        ring = self.ring
        p = ring.p
        out = {}
        for alpha, c in self.terms.items():
            if any(a % p for a in alpha):
                raise NotAPthPower(
                    f"exponent {alpha} is not divisible by {p}", witness=alpha)
            out[tuple(a // p for a in alpha)] = ring.pth_root(c)
        prec = EXACT if self.is_exact() else (self.prec - 1) // p + 1
        return TruncSeries(ring, self.nvars, prec, out)

    def is_pth_power(self):
        p = self.ring.p
        return all(all(a % p == 0 for a in alpha) for alpha in self.terms)

    # -- coefficient/variable reshaping ------------------------------------------

    def map_coefficients(self, fn, ring):
        """Apply ``fn`` to every coefficient, landing in ``ring``."""
        out = {}
        for a, c in self.terms.items():
            v = fn(c)
            if not ring.is_zero(v):
                out[a] = v
        return TruncSeries(ring, self.nvars, self.prec, out)

    def append_var(self):
        """View in one more (last) variable."""
        return TruncSeries(self.ring, self.nvars + 1, self.prec,
                           {a + (0,): c for a, c in self.terms.items()})

    def permute_vars(self, perm):
        """Relabel so new variable i reads old variable perm[i]."""
        if sorted(perm) != list(range(self.nvars)):
            raise DimensionMismatch("not a permutation of the variables")
        out = {}
        for a, c in self.terms.items():
            out[tuple(a[p] for p in perm)] = c
        return TruncSeries(self.ring, self.nvars, self.prec, out)

    def last_degree(self):
        """Maximal exponent of the last variable; -1 for the zero series."""
        if not self.terms:
            return -1
        return max(a[-1] for a in self.terms)

    def origin_order_last(self):
        """Order in the last variable after setting all others to zero."""
        degs = [a[-1] for a in self.terms if not any(a[:-1])]
        return min(degs) if degs else INF

    def split_last(self, q):
        """Write the series as low + X_last^q * high (X_last-degree split).

        The decomposition is exact on stored terms; the high part keeps the
        input bound, so its terms near that bound inherit the usual
        truncation caveat.
        """
        lo, hi = {}, {}
        for a, c in self.terms.items():
            if a[-1] < q:
                lo[a] = c
            else:
                hi[a[:-1] + (a[-1] - q,)] = c
        return (TruncSeries(self.ring, self.nvars, self.prec, lo),
                TruncSeries(self.ring, self.nvars, self.prec, hi))

    def shift_last(self, q):
        """Multiply by X_last^q."""
        return TruncSeries(self.ring, self.nvars, min(self.prec + q, EXACT),
                           {a[:-1] + (a[-1] + q,): c for a, c in self.terms.items()})

    def collect_last(self):
        """Coefficients with respect to the last variable.

        Returns a dict {k: series in one fewer variable}; the coefficient
        of X_last^k inherits certified bound prec - k.
        """
        if self.nvars < 2:
            raise DimensionMismatch("collect_last needs at least two variables")
        buckets = {}
        for a, c in self.terms.items():
            buckets.setdefault(a[-1], {})[a[:-1]] = c
        out = {}
        for k, t in buckets.items():
            prec = EXACT if self.is_exact() else max(1, self.prec - k)
            out[k] = TruncSeries(self.ring, self.nvars - 1, prec, t)
        return out

    @classmethod
    def from_last_var_poly(cls, ring, nvars, coeffs):
        """Rebuild an ``nvars``-variable series from last-variable coefficients."""
        terms = {}
        prec = EXACT
        for k, s in coeffs.items():
            if s.is_zero():
                continue
            prec = min(prec, EXACT if s.is_exact() else s.prec + k)
            for a, c in s.terms.items():
                terms[a + (k,)] = c
        return cls(ring, nvars, prec, terms)

    def leading_term(self):
        """(exponent, coefficient) of the graded-lex smallest term, or None."""
        if not self.terms:
            return None
        a = min(self.terms, key=grlex_key)
        return a, self.terms[a]

    # -- display -----------------------------------------------------------------

    def _var_name(self, j):
        if self.nvars == 1:
            return getattr(self.ring, "series_var", "X")
        return f"X{j + 1}"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        render = getattr(self.ring, "render", str)
        for a in self.support():
            c = self.terms[a]
            factors = []
            for j, e in enumerate(a):
                if e == 1:
                    factors.append(self._var_name(j))
                elif e:
                    factors.append(f"{self._var_name(j)}^{e}")
            cs = render(c)
            if not factors:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(factors))
            else:
                cs = f"({cs})" if ("+" in cs or "/" in cs or "*" in cs) else cs
                parts.append("*".join([cs] + factors))
        return " + ".join(parts)

    def __repr__(self):
        prec = "EXACT" if self.is_exact() else str(self.prec)
        return f"<TruncSeries n={self.nvars} prec={prec}: {self}>"


def _mul_univariate(f, g, prec):
    """Dense fast path for univariate products over GF(p)."""
    ring = f.ring
    if not isinstance(ring, GF):
        if hasattr(ring, "series_mul"):
            return ring.series_mul(f, g, prec)
        return None
    if not f.terms or not g.terms:
        return TruncSeries.zero(ring, 1, prec)
    da = min(f.last_degree(), prec - 1)
    db = min(g.last_degree(), prec - 1)
    a = [0] * (da + 1)
    for (e,), c in f.terms.items():
        if e <= da:
            a[e] = c
    b = [0] * (db + 1)
    for (e,), c in g.terms.items():
        if e <= db:
            b[e] = c
    conv = conv_mod_p(a, b, ring.p)
    out = {(i,): c for i, c in enumerate(conv) if c and i < prec}
    return TruncSeries(ring, 1, prec, out)


def taylor_pairs(alpha):
    """All splittings beta + sigma = alpha (componentwise)."""
    ranges = [range(a + 1) for a in alpha]
    for beta in itertools.product(*ranges):
        sigma = tuple(a - b for a, b in zip(alpha, beta))
        yield beta, sigma
