"""Recursive normalization of power-series ideals given by polynomial
generators, with an optional separability upgrade.

Each recursion level permutes the variables (identity unless searching
for separability), applies a distinguishing shift X_j -> X_j + X_n^s_j
with every s_j a multiple of p, prepares the chosen generator into
unit * H with H monic in the last variable, and eliminates that variable
from the remaining generators through resultants with H.  The monic
witnesses H certify finiteness of each extension; separability of a
witness is the classical nonvanishing of Res(H, dH/dY) and is searched
for over candidate last variables and successive admissible shifts.

Resultant-based elimination is sound but incomplete as a contraction:
when it cannot certify the step (a vanishing resultant against a
generator that is not a multiple of H) the failure is reported, never
silently absorbed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AlgebraError,
    ContractionInconclusive,
    ImproperIdeal,
    SeparabilitySearchExhausted,
    ZeroOrUnitInput,
)
from .series import EXACT, INF, TruncSeries
from .weierstrass import (
    SigmaChoice,
    WeierstrassFactorization,
    distinguish,
    newton_min_set,
    shift_series,
    sigma_candidates,
    weierstrass_divide,
    weierstrass_prepare,
)


@dataclass(frozen=True)
class CoordLayer:
    """One level of the change: permute, then shift off the last variable."""

    nvars: int
    perm: tuple
    sigma: SigmaChoice

    def apply(self, f):
        if f.nvars != self.nvars:
            raise ImproperIdeal("layer applied to a series of the wrong arity")
        g = f if self.perm == tuple(range(self.nvars)) else f.permute_vars(self.perm)
        if self.sigma.is_identity():
            return g
        return g.substitute(shift_series(g.ring, self.nvars, self.sigma))

    def shift_polynomials(self):
        """Exponent vectors of the nonzero shift monomials F_j = X_n^s_j."""
        out = {}
        for j, s in enumerate(self.sigma.sigma):
            if s:
                alpha = [0] * self.nvars
                alpha[-1] = s
                out[j] = tuple(alpha)
        return out


@dataclass(frozen=True)
class CoordChange:
    """Ordered layers, outermost (full arity) first."""

    layers: tuple

    def apply(self, f, upto=None):
        """Transform an ambient series through the first ``upto`` layers.

        Layers beyond the first act on fewer variables: they only make
        sense for series that do not involve the consumed variables, which
        is how the recursion produces them.
        """
        count = len(self.layers) if upto is None else upto
        g = f
        for layer in self.layers[:count]:
            g = layer.apply(g)
        return g


@dataclass(frozen=True)
class NormalizationResult:
    e: int
    change: CoordChange
    witnesses: tuple
    chosen: tuple
    distinguished: tuple
    separable: bool
    certificates: tuple

    def shift_exponent_sets(self):
        """All exponents appearing in emitted shift monomials."""
        out = []
        for layer in self.change.layers:
            out.extend(s for s in layer.sigma.sigma if s)
        return out


def _matmul(a, b, zero):
    n = len(a)
    out = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for k in range(n):
            aik = a[i][k]
            if aik.is_zero():
                continue
            row = b[k]
            for j in range(n):
                if not row[j].is_zero():
                    out[i][j] = out[i][j] + aik * row[j]
    return out


def _det(mat, one):
    """Division-free determinant by minor expansion over column subsets."""
    n = len(mat)
    if n == 0:
        return one
    prev = {0: one}
    for r in range(n):
        cur = {}
        for mask, val in prev.items():
            if val.is_zero():
                continue
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    continue
                entry = mat[r][c]
                if entry.is_zero():
                    continue
                sign = bin(mask & (bit - 1)).count("1") & 1
                term = val * entry
                if sign:
                    term = -term
                key = mask | bit
                cur[key] = cur[key] + term if key in cur else term
        prev = cur
        if not prev:
            break
    full = (1 << n) - 1
    if full in prev:
        return prev[full]
    zero = one - one
    return zero


def _companion_apply(hcoeffs, q, gpoly, ring, nvars, prec):
    """g(C_H) for the companion matrix C_H of the monic polynomial H."""
    zero = TruncSeries.zero(ring, nvars, prec)
    one = TruncSeries.one(ring, nvars, prec)
    comp = [[zero for _ in range(q)] for _ in range(q)]
    for j in range(q - 1):
        comp[j + 1][j] = one
    for i in range(q):
        comp[i][q - 1] = -hcoeffs[i].truncate(prec)
    acc = [[zero for _ in range(q)] for _ in range(q)]
    for k in range(max(gpoly), -1, -1):
        acc = _matmul(acc, comp, zero)
        if k in gpoly:
            c = gpoly[k].truncate(prec)
            for i in range(q):
                acc[i][i] = acc[i][i] + c
    return acc


def resultant_with(fact, g):
    """Res in the last variable of the monic witness against ``g``.

    ``g`` is an ambient series polynomial in the last variable; the result
    lives in one fewer variable.  Computed as det(g(C_H)), which agrees
    with the Sylvester resultant because H is monic.
    """
    ring = g.ring
    n = fact.nvars
    prec = min([g.prec] + [c.prec for c in fact.coeffs]) if fact.coeffs else g.prec
    prec = min(prec, EXACT - 1)
    if n == 1:
        raise ImproperIdeal("no variables left to eliminate into")
    gpoly = g.collect_last()
    if not gpoly:
        return TruncSeries.zero(ring, n - 1, prec)
    mat = _companion_apply(fact.coeffs, fact.q, gpoly, ring, n - 1, prec)
    return _det(mat, TruncSeries.one(ring, n - 1, prec))


def separability_check(fact):
    """Derivative-resultant criterion on a monic witness.

    Returns (flag, certificate): the certificate is the resultant of H and
    dH/dY_n when nonzero at the working precision, else None.
    """
    ring = fact.unit.ring
    p = ring.p
    q = fact.q
    if q == 1:
        return True, TruncSeries.one(ring, max(1, fact.nvars - 1))
    if fact.nvars == 1:
        # the witness is X^q with q >= 2: zero is a repeated root
        return False, None
    dpoly = {}
    for k, c in enumerate(fact.coeffs):
        if k >= 1 and k % p and not c.is_zero():
            dpoly[k - 1] = c.scale_int(k)
    if q % p:
        dpoly[q - 1] = TruncSeries.one(ring, fact.nvars - 1).scale_int(q)
    if not dpoly:
        return False, None
    prec = min([c.prec for c in fact.coeffs] + [EXACT - 1])
    mat = _companion_apply(fact.coeffs, q, dpoly, ring, fact.nvars - 1, prec)
    res = _det(mat, TruncSeries.one(ring, fact.nvars - 1, prec))
    if res.is_zero():
        return False, None
    return True, res


def _move_last(nvars, v):
    """Permutation sending variable v to the last slot, order preserved."""
    rest = [j for j in range(nvars) if j != v]
    return tuple(rest + [v])


def normalize_principal(f, ensure_separable=False, prec=None, sigma_budget=4):
    """Normalize the principal ideal (f).

    Puts f into unit * H with H monic in the last variable over the first
    n-1 variables; with ``ensure_separable`` the candidate last variables
    and successive admissible shifts are searched until the witness passes
    the derivative-resultant criterion.
    """
    if f.is_zero() or not f.ring.is_zero(f.constant_term()):
        raise ZeroOrUnitInput("need a nonzero non-unit series")
    if prec is None:
        if f.is_exact():
            raise ZeroOrUnitInput("pass a working precision for exact input")
        prec = f.prec
    work = f.truncate(prec)
    n = f.nvars
    attempts = [tuple(range(n))]
    if ensure_separable:
        attempts = [_move_last(n, v) for v in [n - 1] + list(range(n - 1))]
    last_error = None
    for perm in attempts:
        base = work if perm == tuple(range(n)) else work.permute_vars(perm)
        for sigma in _sigma_options(base, sigma_budget if ensure_separable else 1):
            try:
                g, choice = distinguish(base, p_multiples=True, sigma=sigma)
                fact = weierstrass_prepare(g)
            except ZeroOrUnitInput:
                raise
            except AlgebraError as exc:
                last_error = exc
                continue
            ok, cert = separability_check(fact)
            layer = CoordLayer(n, perm, choice)
            result = NormalizationResult(
                e=n - 1,
                change=CoordChange((layer,)),
                witnesses=(fact,),
                chosen=(0,),
                distinguished=(g,),
                separable=ok,
                certificates=(cert,),
            )
            if ok or not ensure_separable:
                return result
    if ensure_separable:
        raise SeparabilitySearchExhausted(
            "no candidate variable/shift within the budget gave a separable witness"
            + (f" (last failure: {last_error})" if last_error else ""))
    raise last_error  # pragma: no cover


def _sigma_options(base, budget):
    """None (let distinguish pick) followed by further injective weights."""
    yield None
    if budget <= 1 or base.nvars == 1:
        return
    try:
        points = newton_min_set(base)
    except ZeroOrUnitInput:
        return
    # with a distinguished base, None meant the identity, not a candidate
    skip_first = base.origin_order_last() == INF
    seen = 0
    for cand in sigma_candidates(points, base.nvars, base.ring.p, p_multiples=True):
        choice = SigmaChoice(cand, True)
        if not choice.injective_on(points):
            continue
        seen += 1
        if seen == 1 and skip_first:
            continue
        yield choice
        if seen >= budget:
            return


def normalize_ideal(gens, prec=None):
    """Normalization data for the ideal generated by polynomial series.

    Recursively prepares a chosen generator and eliminates the last
    variable from the others via resultants with the monic witness;
    recursion stops when the contraction is certifiably zero.
    """
    gens = list(gens)
    if not gens:
        raise ImproperIdeal("no generators")
    ring = gens[0].ring
    n = gens[0].nvars
    if prec is None:
        finite = [g.prec for g in gens if not g.is_exact()]
        if not finite:
            raise ImproperIdeal("pass a working precision for exact generators")
        prec = min(finite)
    current = [g.truncate(prec) for g in gens]
    layers, witnesses, chosen, distinguished_list, certs = [], [], [], [], []
    sep_all = True
    while True:
        nz = [i for i, g in enumerate(current) if not g.is_zero()]
        if not nz:
            break
        nv = current[nz[0]].nvars
        for i in nz:
            if not ring.is_zero(current[i].constant_term()):
                raise ImproperIdeal("a generator is a unit: the ideal is the whole ring")
        pick = nz[0]
        f = current[pick]
        g, choice = distinguish(f, p_multiples=True)
        fact = weierstrass_prepare(g)
        layer = CoordLayer(nv, tuple(range(nv)), choice)
        layers.append(layer)
        witnesses.append(fact)
        chosen.append(pick)
        distinguished_list.append(g)
        ok, cert = separability_check(fact)
        sep_all = sep_all and ok
        certs.append(cert)
        if nv == 1:
            current = []
            continue
        nxt = []
        for i in nz:
            if i == pick:
                continue
            gt = layer.apply(current[i])
            rem = weierstrass_divide(gt, g)[1]
            if rem.is_zero():
                continue  # multiple of the witness: contributes nothing new
            res = resultant_with(fact, gt)
            if res.is_zero():
                raise ContractionInconclusive(
                    "vanishing resultant against a generator outside (H); "
                    "the elimination cannot certify this step")
            nxt.append(res)
        current = nxt
    e = n - len(layers)
    return NormalizationResult(
        e=e,
        change=CoordChange(tuple(layers)),
        witnesses=tuple(witnesses),
        chosen=tuple(chosen),
        distinguished=tuple(distinguished_list),
        separable=sep_all,
        certificates=tuple(certs),
    )
