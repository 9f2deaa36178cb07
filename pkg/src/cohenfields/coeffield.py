"""The one-variable coefficient-field pipeline.

Given a maximal-ideal generator mu = sum a_r(X) t^r with a unit
coefficient normalized to 1, the pipeline

1. descends the tower level, replacing the generator by its p-th root,
   until some coefficient is not a p-th power (``effective_generator``);
2. builds the residue field K = L[root] for the descended generator at a
   working level M (:mod:`cohenfields.residue`);
3. solves a_d(Xbar + xi) root^d + ... + a_0(Xbar + xi) = s for the
   order-one series xi in K[[s]] with the formal implicit-function
   theorem (``build_cohen``);
4. represents completion elements canonically through their images in
   K[[s]]: a polynomial in t_m maps to
   sum_r ( sum_i embed(Delta_i(a_r)) xi^i ) root_m^r (``CohenIso.image``),
   which sends mu itself exactly to s.

In these coordinates the elements annihilated by every positive
Hasse-Schmidt component in the shifted variable are precisely the
constants K; ``check_commutation``, ``check_flat_kernel`` and
``check_coefficient_field`` verify the defining identities at the working
precision.  ``counterexample_report`` reproduces the failure of the whole
construction when the tower level is locked at zero: for X^p t - 1 every
coefficient is a p-th power and the pivot derivative vanishes, so no
coefficient field annihilated by the derivations exists there, while one
level up the pipeline completes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AllCoefficientsPthPowers,
    DerivativeVanishes,
    DimensionMismatch,
    InvalidGenerator,
    LevelExceedsContext,
    NoUnitCoefficient,
    PrecisionTooLow,
)
from .fields import GF
from .implicit import implicit_solve, revert
from .residue import ResidueField
from .series import EXACT, TruncSeries


@dataclass(frozen=True)
class TowerPoly:
    """Polynomial in t^(1/p^level) with univariate series coefficients."""

    level: int
    coeffs: tuple

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def ring(self):
        return self.coeffs[0].ring

    def __mul__(self, other):
        if other.level != self.level:
            raise DimensionMismatch("tower polynomials at different levels")
        ring = self.ring()
        n = len(self.coeffs) + len(other.coeffs) - 1
        zero = TruncSeries.zero(ring, 1)
        out = [zero] * n
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return TowerPoly(self.level, tuple(out))

    def render(self):
        parts = []
        for r, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if r == 0:
                parts.append(f"({c})")
            else:
                tok = "t" if self.level == 0 else f"t^(1/{self.ring().p ** self.level})"
                head = tok if r == 1 else f"{tok}^{r}"
                parts.append(head if str(c) == "1" else f"({c})*{head}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class IdealGenerator:
    """Validated effective generator: unit coefficient 1, not all p-th powers."""

    p: int
    level: int
    coeffs: tuple

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def tower_poly(self):
        return TowerPoly(self.level, self.coeffs)


def _normalize_unit(coeffs, norm_prec):
    ring = coeffs[0].ring
    one = TruncSeries.one(ring, 1)
    if any(c == one for c in coeffs):
        return coeffs
    for c in coeffs:
        if not ring.is_zero(c.constant_term()):
            unit = c
            break
    else:
        raise NoUnitCoefficient("no coefficient of the generator is a unit")
    if unit.is_exact() and unit.degree() > 0 and norm_prec is None:
        raise PrecisionTooLow(
            "normalizing a non-constant unit coefficient to 1 needs a finite "
            "precision; pass norm_prec or pre-normalize the generator")
    prec = norm_prec if norm_prec is not None else unit.prec
    inv = unit.truncate(prec).invert()
    return [c.truncate(prec) * inv for c in coeffs]


def effective_generator(poly, lock_level=False, max_descent=32, norm_prec=None):
    """Descend the tower level until some coefficient is not a p-th power.

    ``poly`` is a :class:`TowerPoly` or a plain coefficient sequence at
    level 0.  Each descent replaces every coefficient by its p-th root and
    raises the level by one, which preserves the generated ideal because
    sum b_r(X)^p t_m^r = (sum b_r t_{m+1}^r)^p.  With ``lock_level`` no
    descent is attempted and an all-p-th-power generator is an error --
    that failure is exactly the counterexample detection signal.
    """
    if isinstance(poly, TowerPoly):
        level, coeffs = poly.level, list(poly.coeffs)
    else:
        level, coeffs = 0, list(poly)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if len(coeffs) < 2:
        raise InvalidGenerator("generator must be non-constant in t")
    ring = coeffs[0].ring
    if not isinstance(ring, GF):
        raise InvalidGenerator("generator coefficients must live over a prime field")
    coeffs = _normalize_unit(coeffs, norm_prec)
    p = ring.p
    descents = 0
    while all(c.is_pth_power() for c in coeffs):
        if lock_level:
            raise AllCoefficientsPthPowers(
                "every coefficient is a p-th power and the level is locked: "
                "no descent is possible at this level")
        if descents >= max_descent:
            raise AllCoefficientsPthPowers(
                f"still all p-th powers after {max_descent} descents")
        coeffs = [c.pth_root() for c in coeffs]
        level += 1
        descents += 1
    return IdealGenerator(p=p, level=level, coeffs=tuple(coeffs))


class CohenIso:
    """Computed structure-isomorphism data at finite precision.

    ``shift`` is the order-one series by which the X-coordinate moves;
    ``unshift`` is its compositional inverse.  Powers of both are cached,
    so repeated images and Taylor extractions stay cheap.
    """

    def __init__(self, field, gen, prec, shift, unshift):
        self.field = field
        self.gen = gen
        self.prec = prec
        self.shift = shift
        self.unshift = unshift
        self._shift_pows = [TruncSeries.one(field, 1, prec), shift]
        self._unshift_pows = [TruncSeries.one(field, 1, prec), unshift]

    # -- power caches ------------------------------------------------------

    def _pow(self, cache, k):
        base = cache[1]
        while len(cache) <= k:
            cache.append((cache[-1] * base).truncate(self.prec))
        return cache[k]

    def _compose_shift(self, F):
        """F(shift(s)) via the cached powers."""
        acc = TruncSeries.zero(self.field, 1, self.prec)
        for (k,), c in sorted(F.terms.items()):
            if k < min(F.prec, self.prec):
                acc = acc + self._pow(self._shift_pows, k).scale(c)
        return acc.truncate(min(F.prec, self.prec))

    def _compose_unshift(self, F):
        acc = TruncSeries.zero(self.field, 1, self.prec)
        for (k,), c in sorted(F.terms.items()):
            if k < min(F.prec, self.prec):
                acc = acc + self._pow(self._unshift_pows, k).scale(c)
        return acc.truncate(min(F.prec, self.prec))

    # -- the isomorphism ---------------------------------------------------------

    def constant(self, c):
        return TruncSeries.constant(self.field, 1, c, prec=self.prec)

    def image(self, a):
        """Canonical K[[s]]-image of a polynomial in t_m (m <= level).

        Coefficients need X-precision at least the s-precision; each a_r
        contributes sum_i embed(Delta_i(a_r)) shift^i times root_m^r.
        """
        poly = a if isinstance(a, TowerPoly) else TowerPoly(self.gen.level, (a,))
        if poly.level > self.field.level:
            raise LevelExceedsContext(
                f"level {poly.level} beyond the working level {self.field.level}")
        N = self.prec
        for c in poly.coeffs:
            if not c.is_exact() and c.prec < N:
                raise PrecisionTooLow(
                    f"coefficient precision {c.prec} cannot certify {N} digits")
        theta = self.field.theta_level(poly.level)
        theta_pow = self.field.one()
        acc = TruncSeries.zero(self.field, 1, N)
        for r, g_r in enumerate(poly.coeffs):
            if r:
                theta_pow = self.field.mul(theta_pow, theta)
            if g_r.is_zero():
                continue
            inner = TruncSeries.zero(self.field, 1, N)
            top = g_r.degree()
            for i in range(min(N, top + 1)):
                d = g_r.delta_var(0, i)
                if d.is_zero():
                    continue
                c = self.field.embed_series(d)
                inner = inner + self._pow(self._shift_pows, i).scale(c)
            acc = acc + inner.scale(theta_pow)
        return acc

    def residue_of(self, F):
        """The s -> 0 specialization."""
        return F.constant_term()

    def hs_component(self, F, i):
        """The order-i Hasse-Schmidt component in the shifted coordinate.

        Rewrites F through the inverse shift, extracts the Taylor
        coefficient of order i, and maps back; the result is certified to
        s-precision (prec - i).
        """
        if i == 0:
            return F.truncate(self.prec)
        Ft = self._compose_unshift(F)
        return self._hs_from_unshifted(Ft, i, min(F.prec, self.prec))

    def _hs_from_unshifted(self, Ft, i, fprec):
        di = Ft.delta_var(0, i)
        out = self._compose_shift(di)
        return out.truncate(max(1, min(fprec, self.prec) - i))

    # -- verification reports ---------------------------------------------------

    def check_commutation(self, a, i_max):
        """Images of Taylor components versus shifted Taylor components.

        For 1 <= i < i_max the image of the order-i component of ``a``
        must agree with the order-i shifted component of the image of
        ``a``, to the certified degree prec - i.
        """
        F = self.image(a)
        Ft = self._compose_unshift(F)
        checks = []
        for i in range(1, i_max):
            lhs = self.image(a.delta_var(0, i))
            rhs = self._hs_from_unshifted(Ft, i, self.prec)
            cd = max(1, self.prec - i)
            ok = lhs.truncate(cd) == rhs.truncate(cd)
            checks.append({"order": i, "certified_degree": cd, "pass": bool(ok)})
        return {
            "input": str(a),
            "checks": checks,
            "pass": all(c["pass"] for c in checks),
        }

    def check_flat_kernel(self):
        """Certify that the flat elements modulo s^prec are the constants.

        The coefficients of unshift^k form a triangular system with unit
        diagonal on the graded pieces 1..prec-1, so the combined Taylor
        extraction map is injective off the constants; both the
        triangularity and the unit diagonal are verified directly.
        """
        N = self.prec
        field = self.field
        diag_ok, tri_ok = True, True
        for k in range(1, N):
            pk = self._pow(self._unshift_pows, k)
            if not all(field.is_zero(pk.coeff((i,))) for i in range(k)):
                tri_ok = False
            if field.is_zero(pk.coeff((k,))):
                diag_ok = False
        return {
            "certified_degree": N,
            "triangular": tri_ok,
            "unit_diagonal": diag_ok,
            "pass": diag_ok and tri_ok,
        }

    def check_coefficient_field(self, samples):
        """Constants are flat, residue-compatible, and closed under +/*."""
        N = self.prec
        field = self.field
        entries = []
        for c in samples:
            lift = self.constant(c)
            flat = all(self.hs_component(lift, i).is_zero() for i in range(1, N))
            residue = field.eq(self.residue_of(lift), c)
            entries.append({"flat": flat, "residue": residue,
                            "pass": flat and residue})
        closure_ok = True
        for c1, c2 in zip(samples, samples[1:]):
            s_lift = self.constant(field.add(c1, c2))
            p_lift = self.constant(field.mul(c1, c2))
            if not (self.constant(c1) + self.constant(c2) == s_lift
                    and self.constant(c1) * self.constant(c2) == p_lift):
                closure_ok = False
        kernel = self.check_flat_kernel()
        ok = closure_ok and kernel["pass"] and all(e["pass"] for e in entries)
        return {
            "samples": entries,
            "closure": closure_ok,
            "kernel": kernel,
            "pass": ok,
        }


def pivot_derivative(field, gen):
    """sum_r embed(a_r') root^r at the generator's own level."""
    theta = field.theta_level(gen.level)
    theta_pow = field.one()
    acc = field.zero()
    for r, a_r in enumerate(gen.coeffs):
        if r:
            theta_pow = field.mul(theta_pow, theta)
        d = a_r.delta_var(0, 1)
        if not d.is_zero():
            acc = field.add(acc, field.mul(field.embed_series(d), theta_pow))
    return acc


def build_cohen(gen, M=None, N=16, window=None, validate=True):
    """Solve for the structure isomorphism data at s-precision N."""
    if M is None:
        M = gen.level + 2
    if M < gen.level:
        raise LevelExceedsContext("working level below the generator level")
    for c in gen.coeffs:
        if not c.is_exact() and c.prec < N:
            raise PrecisionTooLow("generator coefficients carry fewer digits than N")
    if window is None:
        field = ResidueField(gen.p, gen.coeffs, gen.level, M, prec=N + 8,
                             validate=validate)
        slack = -min((c.val for c in field.fmin if c.coeffs), default=0)
        if slack > 0:
            field = ResidueField(gen.p, gen.coeffs, gen.level, M,
                                 prec=N + 8 + int(slack) * 2, validate=validate)
    else:
        field = ResidueField(gen.p, gen.coeffs, gen.level, M, prec=window,
                             validate=validate)
    theta = field.theta_level(gen.level)
    theta_pow = field.one()
    terms = {(1, 0): field.neg(field.one())}
    for r, a_r in enumerate(gen.coeffs):
        if r:
            theta_pow = field.mul(theta_pow, theta)
        top = a_r.degree()
        for i in range(min(N, top + 1)):
            d = a_r.delta_var(0, i)
            if d.is_zero():
                continue
            c = field.mul(field.embed_series(d), theta_pow)
            key = (0, i)
            terms[key] = field.add(terms[key], c) if key in terms else c
    G = TruncSeries(field, 2, N, terms)
    if not field.is_zero(G.coeff((0, 0))):
        raise InvalidGenerator(
            "the generator does not vanish on its own residue class; "
            "it is not irreducible over the Laurent field")
    if field.is_zero(pivot_derivative(field, gen)):
        raise DerivativeVanishes(
            "all coefficient derivatives vanish on the residue class; "
            "descend the level before building the isomorphism")
    shift = implicit_solve(G, N)
    if shift.order() != 1:  # pragma: no cover - the -s term forces order one
        raise InvalidGenerator("solved shift does not have order one")
    unshift = revert(shift, N)
    iso = CohenIso(field, gen, N, shift, unshift)
    s_var = TruncSeries.variable(field, 1, 0, prec=N)
    if not (iso.image(gen.tower_poly()) == s_var):  # pragma: no cover
        raise InvalidGenerator("the generator image failed to reduce to s")
    return iso


def counterexample_mu(p, ring=None):
    """The locked-level failure generator X^p t - 1 as coefficients."""
    ring = ring or GF(p)
    a0 = TruncSeries.constant(ring, 1, ring.from_int(-1))
    a1 = TruncSeries.monomial(ring, 1, (p,))
    return [a0, a1]


def counterexample_report(p, lock_level=False, N=8):
    """Reproduce the rational-scalar failure and its tower resolution.

    With ``lock_level`` the level-locked descent error propagates to the
    caller.  Otherwise the report records: the locked failure, the
    vanishing pivot derivative at level 0, and the completed pipeline at
    the descended level.
    """
    coeffs = counterexample_mu(p)
    if lock_level:
        effective_generator(coeffs, lock_level=True)
        raise InvalidGenerator("locked descent unexpectedly succeeded")  # pragma: no cover
    report = {"p": p, "generator": "X^p*t - 1"}
    try:
        effective_generator(coeffs, lock_level=True)
        report["locked"] = {"error": None}  # pragma: no cover
    except AllCoefficientsPthPowers as exc:
        report["locked"] = {"error": "AllCoefficientsPthPowers", "detail": str(exc)}
    gen0 = IdealGenerator(p=p, level=0, coeffs=tuple(coeffs))
    try:
        build_cohen(gen0, M=0, N=4, validate=False)
        report["level0_derivative"] = {"error": None}  # pragma: no cover
    except DerivativeVanishes as exc:
        report["level0_derivative"] = {"error": "DerivativeVanishes",
                                       "detail": str(exc)}
    gen = effective_generator(coeffs)
    iso = build_cohen(gen, M=gen.level + 1, N=N)
    s_var = TruncSeries.variable(iso.field, 1, 0, prec=N)
    report["unlocked"] = {
        "effective_level": gen.level,
        "generator": gen.tower_poly().render(),
        "shift_order": 1 if iso.shift.order() == 1 else iso.shift.order(),
        "generator_image_is_s": bool(iso.image(gen.tower_poly()) == s_var),
    }
    return report
