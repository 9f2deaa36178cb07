"""Laurent windows and residue-field arithmetic."""

import pytest

from cohenfields.errors import (
    DivisionByZero,
    EmptyPrecisionWindow,
    InvalidGenerator,
)
from cohenfields.fields import GF
from cohenfields.rand import stream
from cohenfields.residue import LaurentField, LaurentSeries, ResidueElem, ResidueField
from cohenfields.series import TruncSeries

F2, F3 = GF(2), GF(3)
X = TruncSeries.variable(F2, 1, 0)
ONE = TruncSeries.one(F2, 1)


def test_laurent_inverse_example():
    f = LaurentSeries(2, 1, [1, 1, 0, 0])  # X + X^2, window [1,5)
    inv = f.inv()
    assert inv.val == -1 and inv.end == 3
    assert list(inv.coeffs) == [1, 1, 1, 1]  # X^-1 + 1 + X + X^2
    assert (inv * f - LaurentSeries.one(2, 4)).is_zero()
    one = LaurentSeries.one(3, 8)
    assert one.inv() == one
    assert (LaurentSeries.x_power(3, -1, 8) * LaurentSeries.x_power(3, 1, 8)) == \
        LaurentSeries.one(3, 8)


def test_laurent_window_propagation():
    a = LaurentSeries(3, 0, [1, 2, 1, 0])      # window [0,4)
    b = LaurentSeries(3, 2, [2, 1])            # window [2,4)
    assert (a * b).val == 2 and (a * b).end == 4
    s = a + b
    assert s.val == 0 and s.end == 4
    # marker arithmetic: zero-at-precision absorbs knowledge soundly
    m = LaurentSeries.zero_below(3, 2)
    assert (a + m).end == 2
    assert (a * m).is_zero() and (a * m).val == 2
    z = LaurentSeries.exact_zero(3)
    assert (a + z) == a and (a * z).is_exact_zero()


def test_laurent_errors():
    with pytest.raises(DivisionByZero):
        LaurentSeries.exact_zero(2).inv()
    with pytest.raises(EmptyPrecisionWindow):
        LaurentSeries.zero_below(2, 3).inv()
    with pytest.raises(EmptyPrecisionWindow):
        LaurentSeries(2, 0, [1, 1]).coeff(5)


def test_laurent_frobenius():
    a = LaurentSeries(3, -1, [1, 2, 1])
    f = a.frobenius()
    assert f.val == -3
    assert (f - a * a * a).is_zero()


def test_laurent_field_protocol():
    L = LaurentField(5, prec=10)
    a = L.from_int(3)
    assert L.eq(L.mul(a, L.inv(a)), L.one())
    f = TruncSeries(L, 1, 6, {(0,): L.from_int(2), (1,): L.one()})
    assert (f * f).coeff((1,)) == L.from_int(4)


def test_ctx_build_examples():
    # F = t + X at level 1: minimal polynomial T^2 + X
    ctx = ResidueField(2, [X, ONE], 0, 1, prec=16)
    assert ctx.degree == 2
    th = ctx.root()
    assert ctx.eq(ctx.mul(th, th), ctx.x())
    # level 0: degree one, the root is the class of X itself
    ctx0 = ResidueField(2, [X, ONE], 0, 0, prec=16)
    assert ctx0.degree == 1 and ctx0.eq(ctx0.root(), ctx0.x())
    # X*t + 1 at level 0: monicization over the Laurent field, root X^-1
    ctx2 = ResidueField(2, [ONE, X], 0, 0, prec=16)
    assert ctx2.eq(ctx2.mul(ctx2.root(), ctx2.x()), ctx2.one())
    assert ctx2.fmin[0] == LaurentSeries.x_power(2, -1, 16)


def test_ctx_validation():
    with pytest.raises(InvalidGenerator):
        ResidueField(2, [X * X, X], 0, 1)        # no coefficient equal to 1
    with pytest.raises(InvalidGenerator):
        ResidueField(2, [ONE, X * X], 0, 1)      # all coefficients p-th powers
    with pytest.raises(InvalidGenerator):
        ResidueField(2, [X], 0, 0)               # constant in t


def test_reducibility_screen():
    # T^2 - X^2 has the Laurent root X at p=3 (simple residue root lifts)
    X3 = TruncSeries.variable(F3, 1, 0)
    ONE3 = TruncSeries.one(F3, 1)
    with pytest.raises(InvalidGenerator):
        ResidueField(3, [(X3 * X3).scale_int(-1), TruncSeries.zero(F3, 1), ONE3],
                     0, 0, prec=16)
    # T^2 - X: no integral Newton slope, passes the screen
    ResidueField(3, [X3.scale_int(-1), TruncSeries.zero(F3, 1), ONE3], 0, 0, prec=16)
    # assume_irreducible skips the screen entirely
    ResidueField(3, [(X3 * X3).scale_int(-1), TruncSeries.zero(F3, 1), ONE3],
                 0, 0, prec=16, assume_irreducible=True)


def test_residue_arith_examples():
    ctx = ResidueField(2, [X, ONE], 0, 1, prec=16)
    th = ctx.root()
    inv = ctx.inv(th)
    assert ctx.eq(ctx.mul(inv, th), ctx.one())
    # inv(theta) = theta * Xbar^{-1}: theta * theta * X^-1 = X * X^-1 = 1
    expected = ctx.mul(th, ctx.embed(LaurentSeries.x_power(2, -1, 16)))
    assert ctx.eq(inv, expected)
    assert ctx.eq(ctx.inv(ctx.one()), ctx.one())
    with pytest.raises(DivisionByZero):
        ctx.inv(ctx.zero())


def test_residue_frobenius_and_tower():
    ctx = ResidueField(2, [X, ONE], 0, 2, prec=16)
    th = ctx.root()
    assert ctx.eq(ctx.frobenius(th), ctx.mul(th, th))
    # frobenius applied (level - m) times gives the level-m tower image
    t0 = ctx.theta_level(0)
    t1 = ctx.theta_level(1)
    assert ctx.eq(ctx.frobenius(t1), t0)
    assert ctx.eq(ctx.frobenius(ctx.frobenius(th)), t0)
    assert ctx.eq(t0, ctx.x())
    c = ctx.embed(LaurentSeries.from_int(2, 1, 16) + LaurentSeries.x_power(2, 1, 16))
    assert ctx.eq(ctx.frobenius(c), ctx.mul(c, c))


def test_generator_vanishes_on_root():
    for p, coeffs in ((2, [X, ONE]), (3, None)):
        if coeffs is None:
            X3 = TruncSeries.variable(GF(3), 1, 0)
            coeffs = [X3.scale_int(-1), TruncSeries.one(GF(3), 1)]
        ctx = ResidueField(p, coeffs, 0, 2, prec=16)
        th0 = ctx.theta_level(0)
        acc = ctx.zero()
        power = ctx.one()
        for r, a in enumerate(coeffs):
            if r:
                power = ctx.mul(power, th0)
            acc = ctx.add(acc, ctx.mul(ctx.embed_series(a), power))
        assert acc.is_zero()


def test_embed_is_ring_homomorphism():
    ctx = ResidueField(2, [X, ONE], 0, 1, prec=16)
    a = LaurentSeries(2, 0, [1, 1, 0, 1] + [0] * 12)
    b = LaurentSeries(2, -1, [1, 0, 1] + [0] * 13)
    assert ctx.eq(ctx.embed(a + b), ctx.add(ctx.embed(a), ctx.embed(b)))
    assert ctx.eq(ctx.embed(a * b), ctx.mul(ctx.embed(a), ctx.embed(b)))
    assert ctx.eq(ctx.embed(LaurentSeries.one(2, 16)), ctx.one())
    # embed(X) is the square of the level-1 root here
    th = ctx.root()
    assert ctx.eq(ctx.embed(LaurentSeries.x_power(2, 1, 16)), ctx.mul(th, th))


def _random_elem(rng, ctx, spread=2, normalized=True):
    # normalized draws pin each coordinate's valuation, like pipeline data
    coords = []
    for _ in range(ctx.degree):
        if rng.random() < 0.3:
            coords.append(LaurentSeries.exact_zero(ctx.p))
        else:
            val = rng.randrange(spread)
            coeffs = [rng.randrange(ctx.p) for _ in range(ctx.prec)]
            if normalized:
                coeffs[0] = rng.randrange(1, ctx.p)
            coords.append(LaurentSeries(ctx.p, val, coeffs))
    return ResidueElem(ctx, coords)


def test_random_inverses():
    ctx2 = ResidueField(2, [X, ONE], 0, 2, prec=12)
    X3 = TruncSeries.variable(F3, 1, 0)
    ctx3 = ResidueField(3, [X3.scale_int(-1), TruncSeries.one(F3, 1)], 0, 1, prec=12)
    for ctx, seed in ((ctx2, 21), (ctx3, 22)):
        rng = stream(seed, "residue-inv")
        count = 0
        while count < 100:
            a = _random_elem(rng, ctx)
            if a.is_zero():
                continue
            count += 1
            assert ctx.eq(ctx.mul(ctx.inv(a), a), ctx.one())


def test_inversion_never_silently_wrong():
    # adversarial windows: every outcome is a verified inverse or a loud
    # PrecisionExhausted; for this seed both paths occur
    from cohenfields.errors import PrecisionExhausted

    ctx = ResidueField(2, [X, ONE], 0, 2, prec=12)
    rng = stream(21, "residue-adversarial")
    exhausted = 0
    inverted = 0
    for _ in range(50):
        a = _random_elem(rng, ctx, spread=8, normalized=False)
        if a.is_zero():
            continue
        try:
            inv = ctx.inv(a)
        except PrecisionExhausted:
            exhausted += 1
            continue
        inverted += 1
        assert ctx.eq(ctx.mul(inv, a), ctx.one())
    assert exhausted >= 1 and inverted >= 1


def test_field_axioms_random():
    ctx = ResidueField(2, [X, ONE], 0, 1, prec=12)
    rng = stream(23, "residue-axioms")
    for _ in range(40):
        a, b, c = (_random_elem(rng, ctx) for _ in range(3))
        assert ctx.eq(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)))
        assert ctx.eq(ctx.mul(a, ctx.add(b, c)),
                      ctx.add(ctx.mul(a, b), ctx.mul(a, c)))


def test_packed_series_mul_matches_schoolbook():
    ctx = ResidueField(2, [X, ONE], 0, 2, prec=12)
    rng = stream(24, "packed")
    for _ in range(10):
        fterms = {(k,): _random_elem(rng, ctx) for k in range(5)}
        gterms = {(k,): _random_elem(rng, ctx) for k in range(4)}
        f = TruncSeries(ctx, 1, 7, fterms)
        g = TruncSeries(ctx, 1, 7, gterms)
        fast = f * g
        slow = {}
        for (a,), ca in f.terms.items():
            for (b,), cb in g.terms.items():
                if a + b < 7:
                    key = (a + b,)
                    v = ctx.mul(ca, cb)
                    slow[key] = ctx.add(slow[key], v) if key in slow else v
        assert fast == TruncSeries(ctx, 1, 7, slow)
