"""Formal implicit-function solver and compositional reversion.

``implicit_solve`` finds the unique series xi with xi(0) = 0 and
G(s, xi(s)) = 0 modulo s^N, for a bivariate G over any coefficient field,
by Newton iteration with precision doubling: each step divides the
residual by the partial derivative in the second slot, which stays a unit
near the origin.  The derivative is the ordinary first derivative (the
order-one Taylor component), which is all the unit condition needs in any
characteristic.  Reversion of an order-one series reuses the same engine
on xi(psi(y)) - y = 0.
"""

from __future__ import annotations

from .errors import (
    DerivativeVanishes,
    DimensionMismatch,
    NotCentered,
    NotOrderOne,
    PrecisionTooLow,
)
from .series import TruncSeries


def sigma_derivative(G):
    """Ordinary first derivative in the second variable."""
    ring = G.ring
    out = {}
    for (a, b), c in G.terms.items():
        if b % ring.p == 0:
            continue
        v = ring.mul(ring.from_int(b), c)
        if not ring.is_zero(v):
            out[(a, b - 1)] = v
    return TruncSeries(ring, 2, G.prec, out)


def eval_bivariate(G, xi, prec):
    """G(s, xi(s)) truncated at s^prec; xi must have positive order."""
    ring = G.ring
    pows = [TruncSeries.one(ring, 1, prec)]

    def power(b):
        while len(pows) <= b:
            pows.append((pows[-1] * xi).truncate(prec))
        return pows[b]

    acc = TruncSeries.zero(ring, 1, prec)
    for (a, b), c in sorted(G.terms.items()):
        if a + b >= prec:
            continue
        term = power(b).scale(c)
        if a:
            term = TruncSeries(ring, 1, prec,
                               {(e + a,): v for (e,), v in term.terms.items()})
        acc = acc + term
    return acc.truncate(prec)


def implicit_solve(G, N):
    """The unique xi with xi(0) = 0 and G(s, xi(s)) = 0 mod s^N.

    Requires G(0,0) = 0 and an invertible derivative at the origin in the
    second slot; when the first-slot derivative at the origin is nonzero
    as well, the solution has order exactly one.
    """
    if G.nvars != 2:
        raise DimensionMismatch("implicit solve expects a bivariate series")
    if N < 1:
        raise PrecisionTooLow("need at least one digit")
    ring = G.ring
    if not ring.is_zero(G.coeff((0, 0))):
        raise NotCentered("G(0,0) is nonzero")
    dG = sigma_derivative(G)
    if ring.is_zero(dG.coeff((0, 0))):
        raise DerivativeVanishes(
            "the derivative in the implicit slot vanishes at the origin")
    if min(G.prec, dG.prec) < N:
        raise PrecisionTooLow("G carries fewer certified digits than requested")
    xi = TruncSeries.zero(ring, 1, 1)
    k = 1
    while k < N:
        k = min(2 * k, N)
        xk = xi._with_prec(k)
        resid = eval_bivariate(G, xk, k)
        if resid.is_zero():
            xi = xk
            continue
        deriv = eval_bivariate(dG, xk, k)
        xi = (xk - resid * deriv.invert()).truncate(k)
    if not ring.is_zero(xi.coeff((0,))):  # pragma: no cover
        raise NotCentered("solver drifted away from the origin")
    return xi._with_prec(N)


def compose(F, g):
    """F(g) for univariate series, exact modulo the minimum precision."""
    if F.nvars != 1 or g.nvars != 1:
        raise DimensionMismatch("composition expects univariate series")
    return F.substitute([g])


def revert(xi, N):
    """Two-sided compositional inverse of an order-one series mod degree N."""
    if xi.nvars != 1:
        raise DimensionMismatch("reversion expects a univariate series")
    ring = xi.ring
    if xi.order() != 1:
        raise NotOrderOne("reversion needs order exactly one")
    lin = xi.coeff((1,))
    if ring.is_zero(lin):  # pragma: no cover - order() == 1 already implies this
        raise NotOrderOne("vanishing linear coefficient")
    terms = {(1, 0): ring.neg(ring.one())}
    for (i,), c in xi.terms.items():
        if i < N:
            key = (0, i)
            terms[key] = ring.add(terms[key], c) if key in terms else c
    H = TruncSeries(ring, 2, min(xi.prec, N), terms)
    psi = implicit_solve(H, N)
    check = compose(xi.truncate(N), psi)
    ident = TruncSeries.variable(ring, 1, 0, prec=N)
    if not (check == ident and compose(psi, xi.truncate(N)) == ident):
        raise PrecisionTooLow(  # pragma: no cover
            "reversion failed its two-sided verification at this precision")
    return psi
