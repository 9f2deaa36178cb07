"""Independent reference computations used as test oracles.

Everything here avoids the library's own code paths: binomials come from
math.comb, shifts are expanded by brute-force polynomial multiplication
over the integers and reduced mod p at the end, and derivatives are the
plain formal ones.
"""

from __future__ import annotations

import math


def comb_mod(n, k, p):
    return math.comb(n, k) % p


def delta_monomial(beta, alpha, p):
    """Coefficient of X^(beta-alpha) in the Taylor component of X^beta."""
    if any(b < a for b, a in zip(beta, alpha)):
        return 0
    r = 1
    for b, a in zip(beta, alpha):
        r = r * math.comb(b, a) % p
    return r


def delta_terms(terms, alpha, p):
    """Taylor component of a {exponent: int} polynomial, as the same shape."""
    out = {}
    for beta, c in terms.items():
        m = delta_monomial(beta, alpha, p)
        if m:
            key = tuple(b - a for b, a in zip(beta, alpha))
            out[key] = (out.get(key, 0) + m * c) % p
    return {k: v for k, v in out.items() if v}


def int_poly_mul(a, b, p):
    """Multiply {exponent-tuple: int} tables, reducing mod p."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = (out.get(key, 0) + ca * cb) % p
    return {k: v for k, v in out.items() if v}


def shift_expand(terms, nvars, p):
    """f(X + T) as a table over 2*nvars exponents (X first, then T)."""
    out = {}
    for beta, c in terms.items():
        prod = {(0,) * (2 * nvars): c % p}
        for j, b in enumerate(beta):
            base = {}
            for k in range(b + 1):
                e = [0] * (2 * nvars)
                e[j] = b - k
                e[nvars + j] = k
                base[tuple(e)] = math.comb(b, k) % p
            prod = int_poly_mul(prod, base, p)
        for key, v in prod.items():
            out[key] = (out.get(key, 0) + v) % p
    return {k: v for k, v in out.items() if v}


def formal_partial(terms, j, p):
    out = {}
    for alpha, c in terms.items():
        if alpha[j] == 0:
            continue
        key = list(alpha)
        key[j] -= 1
        v = alpha[j] * c % p
        if v:
            out[tuple(key)] = v
    return out


def terms_of(f):
    """Int table of a TruncSeries over GF(p)."""
    return dict(f.terms)


def series_from_terms(ring, nvars, prec, terms):
    from cohenfields.series import TruncSeries

    return TruncSeries(ring, nvars, prec, dict(terms))
