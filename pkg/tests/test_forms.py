from __future__ import annotations

import random

import pytest

from bklab.forms import (ABOVE_EPRIME, AT_EPRIME, DIVISIBLE_BY_P, PRIME_TO_P, ZERO_LEVEL,
                         DifferentialForm, NotClosedError, RamificationData, cartier_readout,
                         d, dlog, graded_model, nu_q, pairing_rank, phi_m, regime)
from bklab.residue import ResidueField, TruncationWindow

F2 = ResidueField(2, 1, 0)
F2t = ResidueField(2, 1, 1)
F3t = ResidueField(3, 1, 1)
F2st = ResidueField(2, 1, 2)


def _random_laurent(k, rng, lo=-2, hi=4, terms=3):
    x = k.zero()
    for _ in range(terms):
        e = tuple(rng.randint(lo, hi) for _ in range(k.r))
        x = x + k.monomial(e, rng.randrange(1, k.ff.q))
    return x


def _random_form(k, deg, rng):
    w = DifferentialForm.zero(k, deg)
    if deg == 0:
        return DifferentialForm.function(_random_laurent(k, rng))
    for _ in range(2):
        piece = DifferentialForm.function(_random_laurent(k, rng))
        idx = sorted(rng.sample(range(k.r), deg))
        for i in idx:
            piece = piece.wedge(DifferentialForm.dt(k, i))
        w = w + piece
    return w


# --- d, wedge, dlog ----------------------------------------------------------

def test_d_of_product():
    t1, t2 = F2st.gen(0), F2st.gen(1)
    expect = DifferentialForm.dt(F2st, 0).scale(t2) + DifferentialForm.dt(F2st, 1).scale(t1)
    assert d(t1 * t2) == expect


def test_d_of_square_char2():
    t = F2t.gen()
    assert d(t * t).is_zero()


def test_d_squared_vanishes():
    rng = random.Random(1)
    for k in (F2t, F3t, F2st):
        for _ in range(20):
            x = _random_laurent(k, rng)
            assert d(x).d().is_zero()
            w = _random_form(k, 1, rng)
            assert w.d().d().is_zero()


def test_wedge_examples():
    dt1, dt2 = DifferentialForm.dt(F2st, 0), DifferentialForm.dt(F2st, 1)
    top = dt1.wedge(dt2)
    assert top.degree == 2 and list(top.terms) == [(0, 1)]
    assert dt1.wedge(dt1).is_zero()
    t1 = F2st.gen(0)
    assert dt2.scale(t1).wedge(dt1) == top.scale(t1)


def test_wedge_graded_commutative():
    rng = random.Random(2)
    k = ResidueField(3, 1, 2)
    for _ in range(20):
        a, b = _random_form(k, 1, rng), _random_form(k, 1, rng)
        assert a.wedge(b) == -b.wedge(a)
        c = _random_form(k, 0, rng)
        assert c.wedge(a) == a.wedge(c)


def test_dlog_examples():
    t = F2t.gen()
    one = F2t.one()
    assert dlog(t) == DifferentialForm.dlog_basis(F2t, (0,))
    assert dlog(t * t).is_zero()
    assert dlog((t + one) * t) == d(t).scale(one / (t + one)) + dlog(t)
    with pytest.raises(ZeroDivisionError):
        dlog(F2t.zero())


def test_dlog_multiplicative():
    rng = random.Random(3)
    for k in (F3t, F2st):
        for _ in range(20):
            x, y = _random_laurent(k, rng), _random_laurent(k, rng)
            if x.is_zero() or y.is_zero():
                continue
            assert dlog(x * y) == dlog(x) + dlog(y)


def test_no_forms_above_dimension():
    with pytest.raises(ValueError):
        DifferentialForm(F2t, 2, {(0, 1): F2t.one()})
    with pytest.raises(ValueError):
        DifferentialForm(F2t, 1, {(1,): F2t.one()})
    assert DifferentialForm.zero(F2t, 2).is_zero()


# --- Cartier -----------------------------------------------------------------

def test_cartier_inverse_examples():
    t = F2t.gen()
    dt_t = dlog(t)
    assert dt_t.cartier_inverse() == dt_t
    # t dt -> t^p dt/t = t dt in char 2; for p = 3, dt -> t^2 dt
    dt3 = d(F3t.gen())
    assert dt3.cartier_inverse() == dt3.scale(F3t.gen() ** 2)
    assert DifferentialForm.zero(F2t, 1).cartier_inverse().is_zero()


def test_cartier_examples():
    t = F3t.gen()
    assert d(t).scale(t ** 2).cartier() == d(t)
    assert dlog(t).cartier() == dlog(t)
    assert d(t ** 2 + t ** 5).cartier().is_zero()


def test_cartier_rejects_non_closed():
    t1 = F2st.gen(0)
    with pytest.raises(NotClosedError):
        DifferentialForm.dt(F2st, 1).scale(t1).cartier()


def test_cartier_kills_exact_and_inverts():
    rng = random.Random(4)
    for k in (F2t, F3t, F2st):
        for _ in range(20):
            eta = _random_form(k, 0, rng)
            assert eta.d().cartier().is_zero()
            w = _random_form(k, 1, rng)
            closed = w if w.is_closed() else w.d() if k.r > 1 else w
            if not closed.is_closed():
                continue
            back = closed.cartier().cartier_inverse()
            assert (back - closed).is_exact()
            assert closed.cartier_inverse().cartier() == closed


def test_dlog_lands_in_nu():
    rng = random.Random(5)
    for k in (F2t, F3t, F2st):
        for _ in range(15):
            x = _random_laurent(k, rng)
            if x.is_zero():
                continue
            w = dlog(x)
            if w.is_zero():
                continue
            assert (w - w.cartier_inverse()).is_exact()


def test_nu_q_examples():
    w = TruncationWindow(F2t, hi=4, lo=-2)
    nu0 = nu_q(w, 0)
    assert len(nu0) == 1 and nu0[0] == DifferentialForm.function(F2t.one())
    assert nu_q(TruncationWindow(F2), 1) == []
    nu1 = nu_q(w, 1)
    assert len(nu1) == 1
    assert (nu1[0] - dlog(F2t.gen())).is_exact()


def test_dlog_kernel_is_pth_powers():
    w = TruncationWindow(F2t, hi=3, lo=0)
    for x in w.basis() + [b + F2t.one() for b in w.basis()]:
        if x.is_zero():
            continue
        assert dlog(x).is_zero() == (x.pth_root() is not None)


# --- graded models -----------------------------------------------------------

def test_regimes():
    ram = RamificationData(2, 2, 1)     # e' = 4
    assert [regime(m, ram) for m in range(6)] == [
        ZERO_LEVEL, PRIME_TO_P, DIVISIBLE_BY_P, PRIME_TO_P, AT_EPRIME, ABOVE_EPRIME]
    ram3 = RamificationData(3, 1, 1)    # e' = 3/2
    assert [regime(m, ram3) for m in range(3)] == [ZERO_LEVEL, PRIME_TO_P, ABOVE_EPRIME]


def test_graded_model_examples():
    ram = RamificationData(2, 1, 1)     # e' = 2
    assert graded_model(1, 2, F2, ram).dimension() == 1
    assert graded_model(2, 1, F2, ram).dimension() == 0
    for q in (1, 2):
        assert graded_model(q, 3, F2, ram).dimension() == 0


def test_eprime_not_integral():
    ram = RamificationData(3, 1, 1)
    assert not ram.eprime_integral
    with pytest.raises(ValueError):
        phi_m(graded_model(1, 1, F3t, ram).zero_class(), graded_model(2, 1, F3t, ram).zero_class())


def test_graded_class_equality_mod_z1():
    ram = RamificationData(2, 2, 1)
    model = graded_model(1, 2, F2t, ram)          # Omega^0/Z_1 + Omega^{-1}
    t = F2t.gen()
    a = model.make(DifferentialForm.function(t), None)
    b = model.make(DifferentialForm.function(t + t * t), None)    # t^2 is closed
    assert (a - b).is_zero()
    assert not a.is_zero()


# --- pairing -----------------------------------------------------------------

def test_phi_examples():
    ram = RamificationData(2, 2, 1)
    t = F2t.gen()
    left = graded_model(2, 1, F2t, ram)
    right = graded_model(1, 3, F2t, ram)
    u = left.make(dlog(t))
    v = right.make(DifferentialForm.function(F2t.one()))
    out = phi_m(u, v)
    assert out == dlog(t) and not out.is_exact()
    assert cartier_readout(out) == 1
    assert phi_m(left.zero_class(), v).is_zero()
    # p | m: (x1, 0) against (y1, 0) pairs to zero
    l2, r2 = graded_model(2, 2, F2t, ram), graded_model(1, 2, F2t, ram)
    x1 = l2.make(dlog(t), None)
    y1 = r2.make(DifferentialForm.function(t), None)
    assert phi_m(x1, y1).is_zero()


def test_pairing_left_zero_window():
    # Omega^1 of F_2 is zero, so the left space is {0}
    ram = RamificationData(2, 2, 1)
    rep = pairing_rank(1, 2, ram, F2, TruncationWindow(F2), TruncationWindow(F2))
    assert rep.left_dim == 0 and rep.rank == 0 and rep.nondegenerate


def test_pairing_positive_right_window_is_too_small():
    # with right window {1, t, t^2, t^3} the form dt pairs to zero
    ram = RamificationData(2, 2, 1)
    rep = pairing_rank(1, 2, ram, F2t, TruncationWindow(F2t, hi=1, lo=-1), TruncationWindow(F2t, hi=3, lo=0))
    assert not rep.nondegenerate


@pytest.mark.parametrize("m", [1, 2, 3])
def test_pairing_nondegenerate_small(m):
    ram = RamificationData(2, 2, 1)
    rep = pairing_rank(m, 2, ram, F2t, TruncationWindow(F2t, hi=3, lo=-3), TruncationWindow(F2t, hi=5, lo=-5))
    assert rep.nondegenerate
    assert rep.rank == rep.left_quotient_dim


def test_pairing_symmetric_rank():
    ram = RamificationData(2, 2, 1)
    w = TruncationWindow(F2t, hi=3, lo=-3)
    a = pairing_rank(1, 2, ram, F2t, w, w)
    b = pairing_rank(3, 1, ram, F2t, w, w)
    assert a.rank == b.rank
