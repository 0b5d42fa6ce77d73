from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bklab import linalg
from bklab.residue import FiniteField, ResidueField, TruncationWindow, solve_fp_linear


F2t = ResidueField(2, 1, 1)
F4 = ResidueField(2, 2, 0)
F2st = ResidueField(2, 1, 2)
F3t = ResidueField(3, 1, 1)


# --- arithmetic examples -----------------------------------------------------

def test_char_two_doubling():
    t = F2t.gen()
    assert (t + t).is_zero()


def test_f4_defining_relation():
    g = F4.const(2)
    assert g * g == g + F4.one()


def test_inverse_is_canonical():
    t = F2t.gen()
    x = (t * t + t).inverse()
    assert x == F2t.one() / (t * t + t)
    assert x.serialize() == (F2t.one() / (t * (t + F2t.one()))).serialize()
    assert x * (t * t + t) == F2t.one()


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        F2t.zero().inverse()


def test_lowest_terms():
    t = F2t.gen()
    one = F2t.one()
    x = (t * t + one) / (t + one)      # (t+1)^2/(t+1) in char 2
    assert x == t + one
    assert x.serialize() == (t + one).serialize()


# --- Frobenius and p-th roots ------------------------------------------------

def test_frobenius_examples():
    t = F2t.gen()
    one = F2t.one()
    assert t.frobenius() == t * t
    g = F4.const(2)
    assert g.frobenius() == g + F4.one()
    assert ((t + one) / t).frobenius() == (t * t + one) / (t * t)


def test_pth_root_examples():
    t = F2t.gen()
    assert (t * t).pth_root() == t
    assert t.pth_root() is None
    g = F4.const(2)
    assert g.pth_root() == g * g


def test_pth_root_total_on_finite_fields():
    for p, f in [(2, 3), (3, 2), (5, 1)]:
        k = ResidueField(p, f, 0)
        for c in range(1, p**f):
            x = k.const(c)
            assert x.pth_root() is not None
            assert x.pth_root().frobenius() == x


def test_conway_moduli_irreducible():
    for p in (2, 3, 5):
        for f in (1, 2, 3):
            ff = FiniteField(p, f)
            assert ff.q == p**f
            g = ff.generator
            # generator of the multiplicative group
            assert len({ff.pow(g, i) for i in range(ff.q - 1)}) == ff.q - 1


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FiniteField(2, 2, modulus=[1, 0, 1])    # x^2 + 1 = (x+1)^2


def _elements(k: ResidueField):
    coeffs = st.integers(0, k.ff.q - 1)
    exps = st.tuples(*[st.integers(0, 3)] * k.r)
    polys = st.dictionaries(exps, coeffs, max_size=4)

    def build(nd):
        num, den = nd
        den = {e: c for e, c in den.items() if c} or {(0,) * k.r: 1}
        d = k.from_monomials(den)
        if d.is_zero():
            d = k.one()
        return k.from_monomials(num) / d
    return st.tuples(polys, polys).map(build)


@settings(max_examples=60, deadline=None)
@given(_elements(F2st), _elements(F2st))
def test_frobenius_is_multiplicative(x, y):
    assert (x * y).frobenius() == x.frobenius() * y.frobenius()
    assert (x + y).frobenius() == x.frobenius() + y.frobenius()


@settings(max_examples=60, deadline=None)
@given(_elements(F3t))
def test_pth_root_inverts_frobenius(x):
    assert x.frobenius().pth_root() == x
    assert x.frobenius().pth_root().serialize() == x.serialize()


@settings(max_examples=60, deadline=None)
@given(_elements(F2t), _elements(F2t))
def test_serialization_is_canonical(x, y):
    assert (x.serialize() == y.serialize()) == (x - y).is_zero()


# --- linear algebra ----------------------------------------------------------

def test_solve_identity():
    k = F2t
    w = TruncationWindow(k, hi=2, lo=0)
    assert len(w) == 3
    v = k.gen() + k.one()
    sol = solve_fp_linear(w, lambda x: x, v, w)
    assert sol is not None and sol.kernel.size == 0
    assert w.element(sol.particular) == v


def test_fixed_points_of_squaring_are_constants():
    # kernel of x -> x - x^2 on the constants of F_2(t) is F_2
    w = TruncationWindow(F2t, hi=0, lo=0)
    sol = solve_fp_linear(w, lambda x: x - x * x, F2t.zero(), w)
    assert sol is not None
    assert sol.kernel.shape[0] == 1
    assert w.element(sol.kernel[0]) == F2t.one()


def test_zero_map_inconsistent():
    w = TruncationWindow(F2t, hi=2, lo=0)
    assert solve_fp_linear(w, lambda x: F2t.zero(), F2t.one(), w) is None


def test_dimension_mismatch():
    with pytest.raises(linalg.DimensionError):
        linalg.solve_mod_p(np.eye(3, dtype=np.int64), np.ones(2, dtype=np.int64), 2)


def test_rank_and_nullspace():
    a = np.array([[1, 2, 0], [2, 4, 0], [0, 0, 1]])
    assert linalg.rank(a, 5) == 2
    ns = linalg.nullspace(a, 5)
    assert ns.shape == (1, 3)
    assert not np.any(a @ ns[0] % 5)


def test_window_contains_one():
    for k in (F2t, F2st, F4):
        w = TruncationWindow(k)
        assert w.contains(k.one())
        assert w.element(w.coords(k.one())) == k.one()
