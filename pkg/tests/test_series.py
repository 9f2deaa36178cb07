"""Truncated series arithmetic and the divided-power Taylor maps."""

import pytest

import _oracles as orc
from cohenfields.errors import (
    DimensionMismatch,
    NotAPthPower,
    NotAUnit,
    SubstitutionNotLocal,
)
from cohenfields.rand import random_series, stream
from cohenfields.series import EXACT, INF, TruncSeries, binom_mod, taylor_pairs
from cohenfields.fields import GF

F2, F3, F5 = GF(2), GF(3), GF(5)


def V(ring, n, j, prec=EXACT):
    return TruncSeries.variable(ring, n, j, prec=prec)


def test_arith_examples():
    X = V(F2, 1, 0)
    one = TruncSeries.one(F2, 1)
    assert (one + X) * (one + X) == one + TruncSeries.monomial(F2, 1, (2,))
    f = random_series(stream(1, "arith"), F3, 2, 6)
    assert f + TruncSeries.zero(F3, 2) == f
    X1, X2 = V(F3, 2, 0), V(F3, 2, 1)
    prod = (X1 + X2) * (X1 + X2.scale_int(2))
    # oracle: schoolbook over the integers, reduced mod 3
    expect = orc.int_poly_mul({(1, 0): 1, (0, 1): 1}, {(1, 0): 1, (0, 1): 2}, 3)
    assert prod.terms == expect == {(2, 0): 1, (0, 2): 2}


def test_ring_mismatch():
    with pytest.raises(DimensionMismatch):
        V(F2, 1, 0) + V(F3, 1, 0)
    with pytest.raises(DimensionMismatch):
        V(F2, 1, 0) * V(F2, 2, 0)


def test_binom_lucas_matches_comb():
    import math

    for p in (2, 3, 5, 7):
        for n in range(40):
            for k in range(40):
                assert binom_mod(n, k, p) == math.comb(n, k) % p if k <= n \
                    else binom_mod(n, k, p) == 0


def test_delta_examples():
    # oracle: expand (X+T)^3 over F2 and read the T^2 coefficient
    table = orc.shift_expand({(3,): 1}, 1, 2)
    assert table[(1, 2)] == 1
    X3 = TruncSeries.monomial(F2, 1, (3,))
    assert X3.delta((2,)) == V(F2, 1, 0)
    f = random_series(stream(2, "delta"), F5, 2, 7)
    assert f.delta((0, 0)) == f
    assert TruncSeries.monomial(F5, 2, (1, 2)).delta((2, 0)).is_zero()


def test_delta_var_examples():
    X1X2sq = TruncSeries.monomial(F3, 2, (1, 2))
    # oracle: expand (X2+T)^2, coefficient of T^1 is 2*X2
    assert orc.shift_expand({(2,): 1}, 1, 3)[(1, 1)] == 2
    assert X1X2sq.delta_var(1, 1) == TruncSeries.monomial(F3, 2, (1, 1), F3.from_int(2))
    assert V(F3, 2, 0).delta_var(0, 1) == TruncSeries.one(F3, 2)
    assert V(F3, 2, 0).delta_var(0, 2).is_zero()


def test_delta_against_shift_oracle():
    for p in (2, 3, 5):
        ring = GF(p)
        rng = stream(3, f"shift:{p}")
        for _ in range(20):
            f = random_series(rng, ring, 1, 8)
            table = orc.shift_expand(dict(f.terms), 1, p)
            for i in range(5):
                got = f.delta((i,))
                expect = {(e,): c for (e, te), c in table.items() if te == i}
                assert dict(got.terms) == expect


def test_leibniz_small():
    for p, n in ((2, 2), (3, 1), (5, 2)):
        ring = GF(p)
        rng = stream(4, f"leib:{p}:{n}")
        for _ in range(10):
            f = random_series(rng, ring, n, 8)
            g = random_series(rng, ring, n, 8)
            fg = f * g
            for alpha in [(1,) * n, (2,) + (0,) * (n - 1), (1,) + (2,) * (n - 1)]:
                rhs = TruncSeries.zero(ring, n, 8)
                for beta, sig in taylor_pairs(alpha):
                    rhs = rhs + f.delta(beta) * g.delta(sig)
                cd = 8 - sum(alpha)
                assert fg.delta(alpha).truncate(cd) == rhs.truncate(cd)


def test_factorial_identity_small():
    for p in (3, 5):
        ring = GF(p)
        rng = stream(5, f"fact:{p}")
        for _ in range(10):
            f = random_series(rng, ring, 2, 7)
            for a1 in range(p):
                for a2 in range(p):
                    if a1 + a2 == 0:
                        continue
                    fact = 1
                    for v in list(range(1, a1 + 1)) + list(range(1, a2 + 1)):
                        fact = fact * v % p
                    table = dict(f.terms)
                    for _ in range(a1):
                        table = orc.formal_partial(table, 0, p)
                    for _ in range(a2):
                        table = orc.formal_partial(table, 1, p)
                    assert dict(f.delta((a1, a2)).scale_int(fact).terms) == table


def test_hasse_schmidt_composition_on_monomials():
    import math

    for p in (2, 3):
        ring = GF(p)
        for b in range(8):
            mono = TruncSeries.monomial(ring, 1, (b,))
            for i in range(4):
                for k in range(4):
                    lhs = mono.delta_var(0, k).delta_var(0, i)
                    rhs = mono.delta_var(0, i + k).scale_int(math.comb(i + k, i))
                    assert lhs == rhs


def test_generating_identity_bivariate():
    # sum_i delta_i(f) T^i must reproduce the brute-force shift f(X+T)
    for p in (2, 5):
        ring = GF(p)
        rng = stream(6, f"gen:{p}")
        for _ in range(10):
            f = random_series(rng, ring, 1, 7)
            oracle = orc.shift_expand(dict(f.terms), 1, p)
            got = {}
            for i in range(7):
                for (e,), c in f.delta((i,)).terms.items():
                    got[(e, i)] = c
            assert got == oracle
            assert f.delta((0,)) == f  # T = 0 recovers f


def test_substitute_examples_and_homomorphism():
    X1, X2 = V(F2, 2, 0), V(F2, 2, 1)
    cube = TruncSeries.monomial(F2, 2, (0, 3))
    assert X1.substitute([X1 + cube, X2]) == X1 + cube
    assert (X1 * X1).substitute([X1 + X2 * X2, X2]) == \
        X1 * X1 + TruncSeries.monomial(F2, 2, (0, 4))
    assert (X1 * X2).substitute([X1 + X2 * X2, X2]) == \
        X1 * X2 + TruncSeries.monomial(F2, 2, (0, 3))
    with pytest.raises(SubstitutionNotLocal):
        X1.substitute([X1 + TruncSeries.one(F2, 2), X2])
    rng = stream(7, "subst")
    for _ in range(10):
        f = random_series(rng, F3, 2, 6)
        g = random_series(rng, F3, 2, 6)
        s1 = random_series(rng, F3, 2, 6, min_order=1)
        s2 = random_series(rng, F3, 2, 6, min_order=1) + V(F3, 2, 1, prec=6)
        subs = [s1 + V(F3, 2, 0, prec=6), s2]
        assert (f * g).substitute(subs) == f.substitute(subs) * g.substitute(subs)
        assert (f + g).substitute(subs) == f.substitute(subs) + g.substitute(subs)


def test_invert_examples():
    X = V(F2, 1, 0)
    inv = (TruncSeries.one(F2, 1) + X).truncate(4).invert()
    assert inv.terms == {(0,): 1, (1,): 1, (2,): 1, (3,): 1}
    assert ((TruncSeries.one(F2, 1) + X).truncate(4) * inv) == TruncSeries.one(F2, 1, 4)
    assert TruncSeries.one(F5, 1).invert() == TruncSeries.one(F5, 1)
    with pytest.raises(NotAUnit):
        X.invert()
    rng = stream(8, "inv")
    for p in (3, 5):
        ring = GF(p)
        for _ in range(10):
            u = random_series(rng, ring, 2, 7, min_order=1) + TruncSeries.one(ring, 2, 7)
            assert u * u.invert() == TruncSeries.one(ring, 2, 7)


def test_order():
    assert (V(F2, 2, 0) ** 2 + V(F2, 2, 1) ** 3).order() == 2
    assert TruncSeries.zero(F2, 2).order() == INF
    assert (TruncSeries.one(F2, 2) + V(F2, 2, 0)).order() == 0


def test_pth_root():
    X = V(F2, 1, 0)
    f = TruncSeries.monomial(F2, 1, (2,)) + TruncSeries.monomial(F2, 1, (4,))
    r = f.pth_root()
    assert r * r == f  # square back (char 2)
    assert r == X + TruncSeries.monomial(F2, 1, (2,))
    assert TruncSeries.one(F3, 1).pth_root() == TruncSeries.one(F3, 1)
    with pytest.raises(NotAPthPower) as exc:
        TruncSeries.monomial(F2, 1, (3,)).pth_root()
    assert exc.value.witness == (3,)
    # precision: result certified below ceil(prec / p)
    g = TruncSeries.monomial(F3, 1, (3,), prec=10)
    assert g.pth_root().prec == 4


def test_truncation_bookkeeping():
    f = random_series(stream(9, "prec"), F3, 2, 9)
    g = random_series(stream(10, "prec"), F3, 2, 5)
    assert (f * g).prec == 5
    assert (f + g).prec == 5
    assert all(sum(a) < 5 for a in (f * g).terms)


def test_emission_graded_lex():
    f = TruncSeries(F3, 2, EXACT, {(0, 2): 1, (1, 0): 2, (2, 0): 1, (0, 0): 1})
    assert str(f) == "1 + 2*X1 + X2^2 + X1^2"
    # deterministic: identical input order-independent rendering
    g = TruncSeries(F3, 2, EXACT, {(2, 0): 1, (0, 0): 1, (0, 2): 1, (1, 0): 2})
    assert str(g) == str(f)
