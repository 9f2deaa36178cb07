"""Seeded random streams and element generators for property runs.

Each consumer derives its stream from (seed, namespace), so adding checks
to one namespace never shifts another's stream; string seeding in
:mod:`random` is stable across runs and platforms.
"""

from __future__ import annotations

import random

from .series import TruncSeries


def stream(seed, namespace):
    return random.Random(f"{seed}:{namespace}")


def random_series(rng, ring, nvars, prec, terms=6, min_order=0, max_exp=None):
    """Sparse random series with the requested number of attempted terms."""
    if max_exp is None:
        max_exp = prec
    out = {}
    for _ in range(terms):
        alpha = tuple(rng.randrange(max_exp) for _ in range(nvars))
        deg = sum(alpha)
        if deg >= prec or deg < min_order:
            continue
        c = rng.randrange(1, ring.p)
        out[alpha] = ring.from_int(c)
    return TruncSeries(ring, nvars, prec, out)


def random_unit(rng, ring, nvars, prec, terms=6):
    f = random_series(rng, ring, nvars, prec, terms, min_order=1)
    return f + TruncSeries.one(ring, nvars, prec)


def random_distinguished(rng, ring, nvars, prec, qmax=4):
    """X_n-distinguished of certified order q: X_n^q * unit + vanishing terms."""
    q = rng.randrange(1, qmax + 1)
    alpha = [0] * nvars
    alpha[-1] = q
    lead = TruncSeries.monomial(ring, nvars, alpha, prec=prec)
    g = lead * random_unit(rng, ring, nvars, prec, terms=4)
    for _ in range(4):
        beta = [rng.randrange(max(1, prec // 2)) for _ in range(nvars)]
        if nvars > 1 and not any(beta[:-1]):
            beta[rng.randrange(nvars - 1)] = 1
        if sum(beta) < prec:
            g = g + TruncSeries.monomial(ring, nvars, beta,
                                         ring.from_int(rng.randrange(1, ring.p)),
                                         prec=prec)
    return g, g.origin_order_last()


def random_implicit_problem(rng, field, prec, terms=5, sigma_deg=3):
    """Admissible bivariate G: G(0,0) = 0, unit derivative in the second slot."""
    table = {(0, 1): field.one()}
    for _ in range(terms):
        a = rng.randrange(prec)
        b = rng.randrange(sigma_deg + 1)
        if a + b < 1 or a + b >= prec:
            continue
        c = field.from_int(rng.randrange(1, field.p))
        key = (a, b)
        table[key] = field.add(table[key], c) if key in table else c
    if field.is_zero(table[(0, 1)]):
        table[(0, 1)] = field.one()
    return TruncSeries(field, 2, prec, table)


def random_tower_element(rng, pc, max_level=2, max_deg=3):
    level = rng.randrange(max_level + 1)
    num = [rng.randrange(pc.p) for _ in range(rng.randrange(1, max_deg + 2))]
    den = [rng.randrange(pc.p) for _ in range(rng.randrange(1, max_deg + 2))]
    if not any(num):
        num[0] = 1
    if not any(den):
        den[-1] = 1
    return pc.make(level, num, den)
