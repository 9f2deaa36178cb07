"""The Laurent series field F_p((X)) at finite precision, and its finite
extensions by roots of tower generators.

Precision model
---------------
A :class:`LaurentSeries` knows its coefficients on a window ``[val, end)``
and is certified *zero* below ``val``; nothing is claimed at or beyond
``end``.  The normal form keeps the leading stored coefficient nonzero, so
``val`` is the true valuation whenever the window is nonempty.  Two
degenerate shapes share the empty-window representation: the exact zero
(``val`` infinite) and the "zero at this precision" marker (``val`` = the
exponent up to which vanishing is certified).  Addition intersects
knowledge regions, multiplication adds valuations and keeps the shorter
residual length, and every operation fails loudly rather than emit an
uncertified digit.

Residue fields
--------------
:class:`ResidueField` models L[T]/(Fmin) where Fmin is the monicization
over L = F_p((X)) of a tower generator evaluated at T^(p^j): the caller
supplies the generator's coefficients a_0..a_d (series in X) at a base
level and a working level ``M`` = base + j.  Elements are coordinate
vectors over L in the power basis of the adjoined root; multiplication
reduces modulo Fmin, inverses run the extended Euclidean algorithm in
L[T] with valuation-aware pivoting.  Arithmetic on whole univariate
series with these coefficients is accelerated by packing the full
(series-degree x root-power x X-window) grid into one big integer per
operand, so a series product costs one native bignum multiply.
"""

from __future__ import annotations

from . import _kernels as K
from .errors import (
    DimensionMismatch,
    DivisionByZero,
    EmptyPrecisionWindow,
    InvalidGenerator,
    LevelExceedsContext,
    PrecisionExhausted,
)
from .series import EXACT, INF, TruncSeries


class LaurentSeries:
    """Univariate Laurent series over F_p with a certified window."""

    __slots__ = ("p", "val", "coeffs")

    def __init__(self, p, val, coeffs):
        # normalize: leading stored coefficient nonzero, window end fixed
        coeffs = [c % p for c in coeffs]
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        if i == len(coeffs):
            val = INF if val == INF else val + len(coeffs)
            coeffs = []
        else:
            val += i
            coeffs = coeffs[i:]
        self.p = p
        self.val = val
        self.coeffs = tuple(coeffs)

    # -- constructors -----------------------------------------------------

    @classmethod
    def exact_zero(cls, p):
        return cls(p, INF, ())

    @classmethod
    def zero_below(cls, p, cutoff):
        """Zero-at-this-precision marker, certified below ``cutoff``."""
        return cls(p, cutoff, ())

    @classmethod
    def from_int(cls, p, c, prec):
        return cls(p, 0, [c] + [0] * (prec - 1))

    @classmethod
    def one(cls, p, prec):
        return cls.from_int(p, 1, prec)

    @classmethod
    def x_power(cls, p, k, prec):
        return cls(p, k, [1] + [0] * (prec - 1))

    @classmethod
    def from_trunc(cls, ts, prec):
        """Window view of a univariate series over GF(p)."""
        if ts.nvars != 1:
            raise DimensionMismatch("Laurent conversion needs a univariate series")
        p = ts.ring.p
        if ts.is_zero():
            if ts.is_exact():
                return cls.exact_zero(p)
            return cls.zero_below(p, ts.prec)
        val = ts.order()
        end = min(ts.prec, val + prec)
        dense = [0] * (end - val)
        for (e,), c in ts.terms.items():
            if e < end:
                dense[e - val] = c
        return cls(p, val, dense)

    # -- inspection --------------------------------------------------------

    @property
    def end(self):
        """Exponent bound of the knowledge region (may be INF)."""
        return self.val + len(self.coeffs) if self.coeffs else self.val

    def is_zero(self):
        """Zero as far as this precision can tell."""
        return not self.coeffs

    def is_exact_zero(self):
        return not self.coeffs and self.val == INF

    def coeff(self, e):
        if e < self.val:
            return 0
        if self.coeffs and e < self.end:
            return self.coeffs[e - self.val]
        raise EmptyPrecisionWindow(f"coefficient of X^{e} is outside the window")

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries) or other.p != self.p:
            return False
        return (self - other).is_zero()

    __hash__ = None

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        p = self.p
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        end = min(self.end, other.end)
        lo = min(self.val, other.val)
        if end <= lo:
            return LaurentSeries.zero_below(p, end)
        out = [0] * (end - lo)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                e = s.val + i
                if e < end:
                    out[e - lo] = (out[e - lo] + c) % p
        return LaurentSeries(p, lo, out)

    def __neg__(self):
        return LaurentSeries(self.p, self.val, [(-c) % self.p for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        p = self.p
        if not self.coeffs or not other.coeffs:
            return LaurentSeries(p, self.val + other.val, ())
        length = min(len(self.coeffs), len(other.coeffs))
        conv = K.conv_mod_p(self.coeffs, other.coeffs, p)
        return LaurentSeries(p, self.val + other.val, conv[:length])

    def scale_int(self, c):
        c %= self.p
        if c == 0:
            return LaurentSeries.exact_zero(self.p)
        return LaurentSeries(self.p, self.val, [x * c % self.p for x in self.coeffs])

    def inv(self):
        if self.is_exact_zero():
            raise DivisionByZero("inverse of 0 in the Laurent field")
        if self.is_zero():
            raise EmptyPrecisionWindow(
                "no certified digits: cannot invert a zero-at-precision series")
        p = self.p
        u = list(self.coeffs)
        n = len(u)
        r = [pow(u[0], p - 2, p)]
        k = 1
        while k < n:
            k = min(2 * k, n)
            conv = K.conv_mod_p(u[:k], r, p)[:k]
            err = [(-c) % p for c in conv]
            err[0] = (err[0] + 1) % p
            corr = K.conv_mod_p(r, err, p)[:k]
            r = r + [0] * (k - len(r))
            r = [(a + b) % p for a, b in zip(r, corr + [0] * (k - len(corr)))]
        return LaurentSeries(p, -self.val, r)

    def frobenius(self):
        """p-th power: exponents dilate by p, coefficients are fixed."""
        p = self.p
        if not self.coeffs:
            if self.val == INF:
                return self
            return LaurentSeries.zero_below(p, p * (self.val - 1) + 1)
        out = [0] * ((len(self.coeffs) - 1) * p + 1)
        for i, c in enumerate(self.coeffs):
            out[i * p] = c
        return LaurentSeries(p, p * self.val, out)

    def shift(self, k):
        """Multiply by X^k."""
        if self.val == INF:
            return self
        return LaurentSeries(self.p, self.val + k, list(self.coeffs))

    def truncate_end(self, end):
        if end >= self.end:
            return self
        if end <= self.val:
            return LaurentSeries.zero_below(self.p, end)
        return LaurentSeries(self.p, self.val, list(self.coeffs[:end - self.val]))

    # -- display -------------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0" if self.val == INF else f"O(X^{self.val})"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.val + i
            if e == 0:
                parts.append(str(c))
            else:
                var = "X" if e == 1 else f"X^{e}"
                parts.append(var if c == 1 else f"{c}*{var}")
        return " + ".join(parts) + f" + O(X^{self.end})"

    def __repr__(self):
        return f"<Laurent p={self.p} [{self.val},{self.end}): {self}>"


class LaurentField:
    """Field context for F_p((X)) (coefficient protocol for series rings)."""

    __slots__ = ("p", "prec")

    def __init__(self, p, prec=32):
        self.p = p
        self.prec = prec

    def zero(self):
        return LaurentSeries.exact_zero(self.p)

    def one(self):
        return LaurentSeries.one(self.p, self.prec)

    def from_int(self, n):
        n %= self.p
        if n == 0:
            return self.zero()
        return LaurentSeries.from_int(self.p, n, self.prec)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inv()

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return (a - b).is_zero()

    def render(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, LaurentField) and other.p == self.p

    def __hash__(self):
        return hash(("LaurentField", self.p))


class ResidueElem:
    """Element of a residue field, as coordinates in the root power basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = tuple(coords)

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def is_scalar(self):
        return all(c.is_zero() for c in self.coords[1:])

    def __add__(self, other):
        return ResidueElem(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return ResidueElem(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return self.field.mul(self, other)

    def inv(self):
        return self.field.inv(self)

    def __eq__(self, other):
        if not isinstance(other, ResidueElem) or other.field is not self.field:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coords):
            if c.is_zero():
                continue
            cs = str(c)
            if j == 0:
                parts.append(f"({cs})")
            else:
                var = "th" if j == 1 else f"th^{j}"
                parts.append(f"({cs})*{var}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<ResidueElem {self}>"


class ResidueField:
    """L[T]/(Fmin) for the monicized, level-raised tower generator.

    ``gen_coeffs`` are the generator's coefficients a_0..a_d as univariate
    series in X over GF(p); ``base_level`` is the tower level they refer
    to; ``level`` >= base_level is the working level M, so the minimal
    polynomial has degree d * p^(M - base_level).  ``prec`` is the Laurent
    window length used for all embedded constants.
    """

    __slots__ = ("p", "base_level", "level", "gen_coeffs", "gen_degree",
                 "degree", "fmin", "prec", "_theta", "_one", "_zero")

    #: display name for univariate series over this field
    series_var = "s"

    def __init__(self, p, gen_coeffs, base_level, level, prec=32,
                 validate=True, assume_irreducible=False):
        if level < base_level:
            raise LevelExceedsContext("working level below the generator level")
        coeffs = list(gen_coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        d = len(coeffs) - 1
        if d < 1:
            raise InvalidGenerator("generator must have positive degree in t")
        if validate:
            one = TruncSeries.one(coeffs[0].ring, 1)
            if not any(c == one for c in coeffs):
                raise InvalidGenerator("no coefficient of the generator equals 1")
            if all(c.is_pth_power() for c in coeffs):
                raise InvalidGenerator(
                    "every coefficient is a p-th power; descend the level first")
        self.p = p
        self.base_level = base_level
        self.level = level
        self.gen_coeffs = tuple(coeffs)
        self.gen_degree = d
        j = p ** (level - base_level)
        D = d * j
        self.degree = D
        self.prec = prec
        lead = LaurentSeries.from_trunc(coeffs[d], prec)
        lead_inv = lead.inv()
        fmin = [LaurentSeries.exact_zero(p) for _ in range(D)]
        for r in range(d):
            lau = LaurentSeries.from_trunc(coeffs[r], prec)
            if not lau.is_exact_zero():
                fmin[r * j] = lau * lead_inv
        self.fmin = tuple(fmin)
        self._theta = None
        self._zero = ResidueElem(self, [LaurentSeries.exact_zero(p)] * D)
        basis = [LaurentSeries.exact_zero(p)] * D
        basis[0] = LaurentSeries.one(p, prec)
        self._one = ResidueElem(self, basis)
        if validate and not assume_irreducible and 2 <= D <= 4:
            self._screen_reducibility()

    # -- coefficient-protocol methods ------------------------------------------

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def from_int(self, n):
        n %= self.p
        if n == 0:
            return self._zero
        coords = [LaurentSeries.exact_zero(self.p)] * self.degree
        coords[0] = LaurentSeries.from_int(self.p, n, self.prec)
        return ResidueElem(self, coords)

    def embed(self, laurent):
        """The inclusion of the Laurent field."""
        coords = [LaurentSeries.exact_zero(self.p)] * self.degree
        coords[0] = laurent
        return ResidueElem(self, coords)

    def embed_series(self, ts):
        return self.embed(LaurentSeries.from_trunc(ts, self.prec))

    def x(self):
        return self.embed(LaurentSeries.x_power(self.p, 1, self.prec))

    def root(self):
        """The adjoined root of Fmin (the working-level tower image)."""
        if self.degree == 1:
            return self.embed(-self.fmin[0])
        coords = [LaurentSeries.exact_zero(self.p)] * self.degree
        coords[1] = LaurentSeries.one(self.p, self.prec)
        return ResidueElem(self, coords)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return (a - b).is_zero()

    def render(self, a):
        return str(a)

    # -- multiplication -----------------------------------------------------------

    def _reduce_vec(self, vec):
        """Reduce a T-coefficient vector modulo the monic Fmin."""
        D = self.degree
        for k in range(len(vec) - 1, D - 1, -1):
            c = vec[k]
            if c.is_exact_zero():
                continue
            for i, fc in enumerate(self.fmin):
                if not fc.is_exact_zero():
                    vec[k - D + i] = vec[k - D + i] - c * fc
        return vec[:D]

    def mul(self, a, b):
        if a.is_scalar():
            s = a.coords[0]
            return ResidueElem(self, [c * s for c in b.coords])
        if b.is_scalar():
            s = b.coords[0]
            return ResidueElem(self, [c * s for c in a.coords])
        D = self.degree
        vec = [LaurentSeries.exact_zero(self.p) for _ in range(2 * D - 1)]
        for i, ca in enumerate(a.coords):
            if ca.is_exact_zero():
                continue
            for k, cb in enumerate(b.coords):
                if cb.is_exact_zero():
                    continue
                vec[i + k] = vec[i + k] + ca * cb
        return ResidueElem(self, self._reduce_vec(vec))

    def frobenius(self, a):
        """a -> a^p via coordinate Frobenius and exponent dilation."""
        p = self.p
        D = self.degree
        vec = [LaurentSeries.exact_zero(p) for _ in range((D - 1) * p + 1)]
        for i, c in enumerate(a.coords):
            if not c.is_exact_zero():
                vec[i * p] = c.frobenius()
        return ResidueElem(self, self._reduce_vec(vec))

    def theta_level(self, m):
        """Image of the tower generator t^(1/p^m), for any m <= level."""
        if m > self.level:
            raise LevelExceedsContext(
                f"level {m} exceeds the working level {self.level}")
        if self._theta is None:
            chain = [self.root()]
            for _ in range(self.level):
                chain.append(self.frobenius(chain[-1]))
            self._theta = chain
        return self._theta[self.level - m]

    # -- inversion -----------------------------------------------------------------

    def inv(self, a):
        if a.is_zero():
            raise DivisionByZero("inverse of 0 in the residue field")
        if a.is_scalar():
            return self.embed(a.coords[0].inv())
        one = LaurentSeries.one(self.p, self.prec)
        zero = LaurentSeries.exact_zero(self.p)
        r0 = list(self.fmin) + [one]
        r1 = list(a.coords)
        s0, s1 = [zero], [one]
        while True:
            d1 = _lp_degree(r1)
            if d1 < 0:
                if all(x.is_exact_zero() for x in r1):
                    raise DivisionByZero(
                        "extended Euclid hit a nontrivial common factor: "
                        "the generator is not irreducible over the Laurent field")
                raise PrecisionExhausted(
                    "Euclidean pivots lost the full certified window; "
                    "rebuild the field with a longer Laurent window")
            if d1 == 0:
                break
            q, r = _lp_divmod(r0, r1, self.p)
            r0, r1 = r1, r
            s0, s1 = s1, _lp_sub(s0, _lp_mul(q, s1, self.p))
        c_inv = r1[0].inv()
        out = [x * c_inv for x in s1]
        out += [zero] * (self.degree - len(out))
        result = ResidueElem(self, self._reduce_vec(out) if len(out) > self.degree else out)
        check = self.mul(a, result) - self._one
        if not check.is_zero():
            raise PrecisionExhausted(
                "inverse failed verification within the tracked precision")
        return result

    # -- packed univariate series multiplication -------------------------------------

    def series_mul(self, f, g, prec):
        """Product of univariate series with coefficients in this field.

        The whole (series degree x root power x X window) coefficient grid
        of each operand is packed into one integer, multiplied natively,
        then unpacked and reduced modulo Fmin degree by degree.
        """
        fprof = _grid_profile(f, prec)
        gprof = _grid_profile(g, prec)
        if fprof is None or gprof is None:
            return TruncSeries.zero(self, 1, prec)
        (fterms, nf, vf, wf) = fprof
        (gterms, ng, vg, wg) = gprof
        D = self.degree
        p = self.p
        stride_x = wf + wg
        stride_t = stride_x * (2 * D)
        width = K.slot_width(min(wf * D * nf, wg * D * ng) * (p - 1) ** 2)
        fint = _pack_grid(fterms, vf, wf, stride_x, stride_t, width)
        gint = _pack_grid(gterms, vg, wg, stride_x, stride_t, width)
        prod = fint * gint
        nout = min(nf + ng - 1, prec)
        wout = min(wf, wg)
        vout = vf + vg
        nbytes = (((nout - 1) * stride_t + (2 * D - 2) * stride_x
                   + stride_x - 1) + 1) * width
        raw = prod.to_bytes(max(nbytes, (prod.bit_length() + 7) // 8), "little")
        terms = {}
        for k in range(nout):
            base_k = k * stride_t
            vec = []
            for j in range(2 * D - 1):
                base = (base_k + j * stride_x) * width
                dense = [int.from_bytes(raw[base + i * width: base + (i + 1) * width],
                                        "little") % p for i in range(wout)]
                vec.append(LaurentSeries(p, vout, dense))
            elem = ResidueElem(self, self._reduce_vec(vec))
            if not elem.is_zero():
                terms[(k,)] = elem
        return TruncSeries(self, 1, prec, terms)

    # -- bounded reducibility screen ----------------------------------------------------

    def _screen_reducibility(self):
        """Look for a Laurent root of Fmin; raise if one is certified.

        Sound but incomplete: integral Newton-polygon slopes give candidate
        valuations, simple residue roots are lifted by Newton iteration,
        and anything inconclusive passes silently.
        """
        p = self.p
        full = list(self.fmin) + [LaurentSeries.one(p, self.prec)]
        pts = []
        for i, c in enumerate(full):
            if c.is_exact_zero():
                continue
            if c.is_zero():
                return  # a coefficient with no certified digits: inconclusive
            pts.append((i, c.val))
        slopes = set()
        for ai, av in pts:
            for bi, bv in pts:
                if bi > ai and (av - bv) % (bi - ai) == 0:
                    slopes.add((av - bv) // (bi - ai))
        for v in sorted(slopes):
            mu = min(val + i * v for i, val in pts)
            reduced = [0] * (len(full))
            for i, val in pts:
                if val + i * v == mu:
                    reduced[i] = full[i].coeffs[0]
            dreduced = [(i * c) % p for i, c in enumerate(reduced)][1:]
            for u0 in range(1, p):
                if _poly_eval_int(reduced, u0, p) != 0:
                    continue
                if _poly_eval_int(dreduced, u0, p) == 0:
                    continue  # multiple residue root: inconclusive
                try:
                    root = LaurentSeries(p, v, [u0] + [0] * (self.prec - 1))
                    for _ in range(self.prec.bit_length() + 2):
                        fval = _lp_eval(full, root)
                        if fval.is_zero():
                            raise InvalidGenerator(
                                "generator has a Laurent-series root "
                                f"(valuation {v}); it is reducible over F_p((X))")
                        dval = _lp_eval(_lp_derive(full, p), root)
                        root = root - fval * dval.inv()
                    if _lp_eval(full, root).is_zero():
                        raise InvalidGenerator(
                            "generator has a Laurent-series root "
                            f"(valuation {v}); it is reducible over F_p((X))")
                except (DivisionByZero, EmptyPrecisionWindow, PrecisionExhausted):
                    continue

    def __repr__(self):
        return (f"ResidueField(p={self.p}, base_level={self.base_level}, "
                f"level={self.level}, degree={self.degree})")


# -- polynomial helpers over the Laurent field (dense, index = T-degree) --------


def _lp_degree(v):
    for i in range(len(v) - 1, -1, -1):
        if not v[i].is_zero():
            return i
    return -1


def _lp_sub(a, b):
    n = max(len(a), len(b))
    p = (a or b)[0].p
    zero = LaurentSeries.exact_zero(p)
    a = list(a) + [zero] * (n - len(a))
    b = list(b) + [zero] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _lp_mul(a, b, p):
    if not a or not b:
        return []
    zero = LaurentSeries.exact_zero(p)
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_exact_zero():
            continue
        for k, y in enumerate(b):
            out[i + k] = out[i + k] + x * y
    return out


def _lp_divmod(a, b, p):
    db = _lp_degree(b)
    if db < 0:
        raise DivisionByZero("division by a precision-zero polynomial")
    try:
        lc_inv = b[db].inv()
    except EmptyPrecisionWindow:
        raise PrecisionExhausted("leading coefficient lost its certified window")
    zero = LaurentSeries.exact_zero(p)
    r = list(a)
    q = [zero] * max(1, len(a) - db)
    while True:
        dr = _lp_degree(r)
        if dr < db:
            break
        c = r[dr] * lc_inv
        q[dr - db] = q[dr - db] + c
        for i in range(db + 1):
            r[dr - db + i] = r[dr - db + i] - c * b[i]
    return q, r


def _lp_eval(poly, x):
    acc = LaurentSeries.exact_zero(x.p)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _lp_derive(poly, p):
    return [c.scale_int(i) for i, c in enumerate(poly)][1:]


def _poly_eval_int(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _grid_profile(f, prec):
    """Common-window grid data for packing: (terms, sdeg_count, val, width).

    All coordinates get aligned to the window [val, val + width); knowledge
    beyond the shortest coordinate window is dropped, which is sound.
    Returns None when nothing certified-nonzero remains.
    """
    terms = {k: v for (k,), v in f.terms.items() if k < prec}
    if not terms:
        return None
    vmin, emin = INF, INF
    for elem in terms.values():
        for c in elem.coords:
            if c.is_exact_zero():
                continue
            emin = min(emin, c.end)
            if c.coeffs:
                vmin = min(vmin, c.val)
    if vmin == INF:
        # only zero-at-precision markers: no certified content
        return None
    if emin <= vmin:
        raise PrecisionExhausted("empty common window while packing")
    return terms, max(terms) + 1, vmin, emin - vmin


def _pack_grid(terms, vmin, w, stride_x, stride_t, width):
    size = ((max(terms) + 1) * stride_t) * width
    buf = bytearray(size)
    for k, elem in terms.items():
        base_k = k * stride_t
        for j, c in enumerate(elem.coords):
            if not c.coeffs:
                continue
            base = base_k + j * stride_x
            for i, x in enumerate(c.coeffs):
                e = c.val + i - vmin
                if 0 <= e < w and x:
                    pos = (base + e) * width
                    buf[pos:pos + width] = x.to_bytes(width, "little")
    return int.from_bytes(buf, "little")
