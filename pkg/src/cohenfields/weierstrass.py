"""Newton diagrams, distinguishing coordinate changes, and Weierstrass
division/preparation for truncated series.

A series is distinguished in its last variable when it survives setting
all other variables to zero.  Any nonzero non-unit series becomes
distinguished after substituting X_j -> X_j + X_n^(sigma_j) for a weight
vector sigma that is injective on the minimal points of the Newton
diagram; the resulting order in X_n is then exactly the minimal weighted
value.  Division by a distinguished series runs the classical fixed-point
iteration on the split low + X_n^q * high, which contracts in the
(X_1..X_{n-1})-adic filtration, so ``prec`` rounds always stabilize the
quotient modulo the working total degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AlgebraError,
    NotDistinguished,
    PrecisionTooLow,
    ZeroOrUnitInput,
)
from .series import EXACT, INF, TruncSeries, grlex_key


def newton_min_set(f):
    """The antichain of componentwise-minimal support exponents."""
    if f.is_zero():
        raise ZeroOrUnitInput("zero series has no Newton diagram data")
    if not f.ring.is_zero(f.constant_term()):
        raise ZeroOrUnitInput("unit series: the Newton diagram contains the origin")
    pts = list(f.terms)
    minimal = []
    for a in pts:
        if not any(b != a and all(x <= y for x, y in zip(b, a)) for b in pts):
            minimal.append(a)
    return tuple(sorted(minimal, key=grlex_key))


@dataclass(frozen=True)
class SigmaChoice:
    """Weights (sigma_1..sigma_{n-1}) for the last-variable substitution.

    The all-zero tuple is the identity marker (no shift anywhere);
    otherwise the weights are dominance-ordered and, when ``p_multiples``
    is set, every entry is a multiple of p.
    """

    sigma: tuple
    p_multiples: bool = False

    def is_identity(self):
        return all(s == 0 for s in self.sigma)

    def value(self, alpha):
        return sum(s * a for s, a in zip(self.sigma, alpha)) + alpha[-1]

    def injective_on(self, points):
        vals = [self.value(a) for a in points]
        return len(set(vals)) == len(vals)


def sigma_candidates(points, nvars, p, p_multiples=False):
    """Admissible weight tuples in the canonical search order.

    The last weight ascends first (step p when flagged), then each earlier
    weight runs over multiples of its successor; ranges are capped by the
    radix bound M = 1 + max coordinate, which always contains a tuple
    injective on ``points``, so the first injective candidate is
    well-defined and minimal for this order.
    """
    if nvars == 1:
        yield ()
        return
    step = p if p_multiples else 1
    mrad = 1 + max((max(a) for a in points), default=1)
    cap = step * mrad

    def fill(k, tail):
        if k == 0:
            yield tail
            return
        lo = tail[0]
        for v in range(lo, lo * cap + 1, lo):
            yield from fill(k - 1, (v,) + tail)

    for last in range(step, cap + 1, step):
        yield from fill(nvars - 2, (last,))


def select_sigma(points, nvars, p, p_multiples=False):
    """First candidate whose weighted values separate ``points``."""
    for cand in sigma_candidates(points, nvars, p, p_multiples):
        choice = SigmaChoice(cand, p_multiples)
        if choice.injective_on(points):
            return choice
    raise AlgebraError("weight search unexpectedly exhausted")  # pragma: no cover


def shift_series(ring, nvars, sigma):
    """The substitution targets X_j + X_n^(sigma_j) (identity where 0)."""
    gs = []
    for j in range(nvars - 1):
        g = TruncSeries.variable(ring, nvars, j)
        if sigma.sigma[j]:
            alpha = [0] * nvars
            alpha[-1] = sigma.sigma[j]
            g = g + TruncSeries.monomial(ring, nvars, alpha)
        gs.append(g)
    gs.append(TruncSeries.variable(ring, nvars, nvars - 1))
    return gs


def distinguish(f, p_multiples=False, sigma=None):
    """Make ``f`` distinguished in its last variable.

    Returns ``(g, choice)`` with g = f(X_1 + X_n^s_1, ..., X_n) and the
    order of g(0,..,0,X_n) equal to the minimal weighted value of the
    Newton diagram.  Already-distinguished input comes back unchanged with
    the identity choice.
    """
    if f.is_zero() or not f.ring.is_zero(f.constant_term()):
        raise ZeroOrUnitInput("need a nonzero non-unit series")
    n = f.nvars
    if sigma is None:
        if f.origin_order_last() != INF:
            return f, SigmaChoice((0,) * (n - 1), p_multiples)
        points = newton_min_set(f)
        sigma = select_sigma(points, n, f.ring.p, p_multiples)
    else:
        points = newton_min_set(f)
        if not sigma.injective_on(points):
            raise NotDistinguished("supplied weights are not injective on the diagram")
    if sigma.is_identity():
        return f, sigma
    q = min(sigma.value(a) for a in f.terms)
    if q >= f.prec:
        raise PrecisionTooLow(
            f"certified order would be {q}, at or beyond the precision {f.prec}")
    g = f.substitute(shift_series(f.ring, n, sigma))
    if g.origin_order_last() != q:
        raise AlgebraError("distinguished order mismatch")  # pragma: no cover
    return g, sigma


@dataclass(frozen=True)
class WeierstrassFactorization:
    """g = unit * (X_n^q + a_{q-1} X_n^{q-1} + ... + a_0), a_i(0) = 0.

    ``coeffs`` holds a_0..a_{q-1} as series in one fewer variable;
    ``nvars`` is the ambient variable count.
    """

    nvars: int
    q: int
    unit: TruncSeries
    coeffs: tuple

    def poly_series(self):
        """The monic distinguished polynomial as an ambient series."""
        ring = self.unit.ring
        parts = {k: c for k, c in enumerate(self.coeffs)}
        if self.nvars == 1:
            terms = {(k,): c.constant_term() for k, c in parts.items()
                     if not c.is_zero()}
            terms[(self.q,)] = ring.one()
            prec = min([EXACT] + [c.prec + k for k, c in parts.items()
                                  if not c.is_exact()])
            return TruncSeries(ring, 1, prec, terms)
        parts[self.q] = TruncSeries.one(ring, self.nvars - 1)
        return TruncSeries.from_last_var_poly(ring, self.nvars, parts)


def weierstrass_divide(f, g, q=None):
    """Division f = quot * g + rem with rem of X_n-degree below q.

    ``g`` must be distinguished of order q in X_n; the identity holds
    exactly modulo the working total-degree precision.
    """
    f._check_compatible(g)
    q0 = g.origin_order_last()
    if q0 is INF or q0 < 1:
        raise NotDistinguished("divisor is not distinguished of positive order")
    if q is not None and q != q0:
        raise NotDistinguished(f"stated order {q} but certified order is {q0}")
    q = q0
    prec = min(f.prec, g.prec)
    if prec >= EXACT:
        raise PrecisionTooLow("division needs a finite working precision; truncate first")
    if q >= prec:
        raise PrecisionTooLow("divisor order at or beyond the working precision")
    f = f._with_prec(prec)
    g = g._with_prec(prec)
    b, e = g.split_last(q)
    einv = e.invert()
    quot = TruncSeries.zero(f.ring, f.nvars, prec)
    for _ in range(prec + 1):
        rho = (f - quot * b).split_last(q)[1]
        nxt = einv * rho
        if nxt == quot:
            break
        quot = nxt
    else:  # pragma: no cover
        raise AlgebraError("division fixed point failed to stabilize")
    rem = f - quot * g
    if rem.last_degree() >= q:  # pragma: no cover
        raise AlgebraError("division remainder exceeds the stated degree")
    return quot, rem


def weierstrass_prepare(g):
    """Factor a distinguished series as unit times a distinguished polynomial."""
    q = g.origin_order_last()
    if q is INF or q < 1:
        raise NotDistinguished("series is not distinguished of positive order")
    prec = g.prec
    if prec >= EXACT:
        raise PrecisionTooLow("preparation needs a finite working precision; truncate first")
    ring = g.ring
    n = g.nvars
    alpha = [0] * n
    alpha[-1] = q
    xq = TruncSeries.monomial(ring, n, alpha, prec=prec)
    quot, rem = weierstrass_divide(xq, g)
    h = xq - rem
    unit = quot.invert()
    if n == 1:
        coeffs = ()
    else:
        buckets = (-rem).collect_last()
        coeffs = tuple(buckets.get(k, TruncSeries.zero(ring, n - 1, max(1, prec - k)))
                       for k in range(q))
        for c in coeffs:
            if not ring.is_zero(c.constant_term()):  # pragma: no cover
                raise AlgebraError("preparation lost the distinguished form")
    fact = WeierstrassFactorization(nvars=n, q=q, unit=unit, coeffs=coeffs)
    if not (unit * h == g):  # pragma: no cover
        raise AlgebraError("preparation failed to reconstruct the input")
    return fact
