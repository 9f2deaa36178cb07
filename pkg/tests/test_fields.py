"""Prime field and perfect-closure tower arithmetic."""

import pytest

from cohenfields.errors import DivisionByZero
from cohenfields.fields import GF, PerfClosure
from cohenfields.rand import random_tower_element, stream


def test_prime_field_examples():
    F5 = GF(5)
    # brute-force oracle over the residues
    inv2 = next(x for x in range(1, 5) if 2 * x % 5 == 1)
    assert inv2 == 3
    assert F5.inv(2) == 3
    assert GF(2).add(1, 1) == 0
    assert GF(3).mul(2, 2) == 1


def test_prime_field_errors_and_axioms():
    F7 = GF(7)
    with pytest.raises(DivisionByZero):
        F7.inv(0)
    with pytest.raises(ValueError):
        GF(6)
    for a in range(1, 7):
        assert F7.mul(F7.inv(a), a) == 1
        assert F7.frobenius(a) == pow(a, 7, 7)


def test_tower_examples():
    pc = PerfClosure(2)
    t, t1 = pc.t(), pc.t_root(1)
    assert pc.mul(t1, t1) == t          # the square drops back to level 0
    assert pc.add(t, t).is_zero()
    assert pc.frobenius(t1) == t
    assert pc.frobenius(pc.from_int(1)) == pc.from_int(1)
    a = pc.add(t, t1)
    t_sq = pc.mul(t, t)
    assert pc.frobenius(a) == pc.add(t_sq, t)   # (x+y)^2 = x^2+y^2 in char 2
    assert pc.mul(pc.frobenius(a), pc.one()) == pc.mul(a, a)  # square back
    assert pc.pth_root(t) == t1
    assert pc.pth_root(pc.add(t_sq, t)) == a
    assert pc.pth_root(pc.one()) == pc.one()


def test_tower_inverse_normal_form():
    pc = PerfClosure(3)
    t1 = pc.t_root(1)
    inv = pc.inv(t1)
    assert pc.mul(inv, t1) == pc.one()
    # normal form: monic denominator, reduced, minimal level
    assert inv.den == (0, 1) and inv.num == (1,) and inv.level == 1
    with pytest.raises(DivisionByZero):
        pc.inv(pc.zero())


def test_embedding_coherence():
    # the same element computed after lifting the level agrees
    pc = PerfClosure(2)
    t = pc.t()
    lifted = pc.make(2, (0, 0, 0, 0, 1), (1,))  # u^4 at level 2 is t
    assert lifted == t and lifted.level == 0


def test_canonicalize_idempotent_and_roundtrips():
    for p in (2, 3, 5):
        pc = PerfClosure(p)
        rng = stream(11, f"fields:{p}")
        for _ in range(200):
            a = random_tower_element(rng, pc)
            again = pc.make(a.level, a.num, a.den)
            assert again == a
            assert pc.pth_root(pc.frobenius(a)) == a
            assert pc.frobenius(pc.pth_root(a)) == a


def test_field_axioms_random():
    for p in (2, 3, 5):
        pc = PerfClosure(p)
        rng = stream(13, f"axioms:{p}")
        for _ in range(60):
            a = random_tower_element(rng, pc)
            b = random_tower_element(rng, pc)
            c = random_tower_element(rng, pc)
            assert pc.add(pc.add(a, b), c) == pc.add(a, pc.add(b, c))
            assert pc.mul(pc.mul(a, b), c) == pc.mul(a, pc.mul(b, c))
            assert pc.mul(a, pc.add(b, c)) == pc.add(pc.mul(a, b), pc.mul(a, c))
            if not a.is_zero():
                assert pc.mul(a, pc.inv(a)) == pc.one()


def test_frobenius_level_never_rises():
    pc = PerfClosure(3)
    rng = stream(17, "levels")
    for _ in range(100):
        a = random_tower_element(rng, pc)
        assert pc.frobenius(a).level <= a.level
        assert pc.pth_root(a).level <= a.level + 1
