from __future__ import annotations

import random

import pytest

from bklab.forms import DifferentialForm
from bklab.milnor import (SymbolSum, expected_k1_dim, filtration_report, k1_brute_oracle,
                          kummer_quotient, normalize, proposition_check, rho_0, rho_m,
                          rho_property_checks)
from bklab.oracle import hilbert_symbol
from bklab.padic import PrecisionError, shipped_field

Q2 = shipped_field("q2")
ZETA_FIELDS = ["q2", "q2_sqrt2", "q2_sqrt_m2", "q2_i", "q3_zeta3", "q4"]


def sym(*xs):
    return SymbolSum.symbol(*xs)


# --- rho maps ----------------------------------------------------------------

def test_rho_0_examples():
    assert rho_0(Q2, 1, (), 1).terms == [(1, (Q2.pi(),))]
    assert len(rho_0(Q2, 1, (), 0)) == 0
    Q4 = shipped_field("q4")
    S = rho_0(Q4, 2, [(2, 3)])
    assert S.terms == [(1, (Q4.teichmuller(2), Q4.teichmuller(3)))]
    with pytest.raises(ValueError):
        rho_0(Q4, 2, [(0, 3)])


def test_rho_m_examples():
    k = Q2.residue_field
    assert rho_m(Q2, 1, 2, k.one()).terms == [(1, (Q2.from_int(5),))]
    S = rho_m(Q2, 2, 2, None, DifferentialForm.function(k.one()))
    assert S.terms == [(1, (Q2.from_int(5), Q2.pi()))]
    assert len(rho_m(Q2, 2, 2)) == 0
    with pytest.raises(ValueError):
        rho_m(Q2, 1, Q2.N, k.one())


# --- normalization -----------------------------------------------------------

def test_normalize_pi_pi():
    for name in ("q2", "q2_sqrt2", "q3_zeta3"):
        K = shipped_field(name)
        a = normalize(sym(K.pi(), K.pi()))
        b = sym(K.pi(), -K.one()).scale(K.p - 1)
        assert filtration_report(a - b).trivial
        assert hilbert_symbol(K.pi(), K.pi()).j == (K.p - 1) * hilbert_symbol(K.pi(), -K.one()).j % K.p


def test_normalize_bilinear_mod_p():
    assert len(normalize(sym(Q2.from_int(4), Q2.from_int(7)))) == 0
    assert len(normalize(sym(Q2.from_int(3), Q2.from_int(5)).scale(2))) == 0


def test_normalize_steinberg():
    Q4 = shipped_field("q4")
    g = Q4.teichmuller(2)
    assert len(normalize(sym(g, Q4.one() - g))) == 0
    x = Q2.from_int(7) / Q2.from_int(4)
    assert len(normalize(sym(x, Q2.one() - x))) == 0


def test_normalize_deterministic():
    S = sym(Q2.from_int(3), Q2.from_int(2)) + sym(Q2.from_int(5), Q2.from_int(6))
    T = sym(Q2.from_int(5), Q2.from_int(6)) + sym(Q2.from_int(3), Q2.from_int(2))
    assert normalize(S).serialize() == normalize(T).serialize()


# --- filtration reports ------------------------------------------------------

def test_report_examples():
    r = filtration_report(sym(Q2.from_int(2)))
    assert r.level == 0 and r.graded_class.serialize() == "(0, 1)"
    r = filtration_report(sym(Q2.from_int(5)))
    assert r.level == 2 and not r.graded_class.is_zero()
    r = filtration_report(sym(Q2.from_int(3), Q2.from_int(2)))
    assert r.level == 2 and not r.graded_class.is_zero()
    assert any("pi-slot" in step for step in r.audit)
    assert filtration_report(sym(Q2.from_int(17))).trivial


def test_report_refuses_q3():
    with pytest.raises(ValueError):
        filtration_report(sym(Q2.from_int(3), Q2.from_int(5), Q2.from_int(7)))


def test_report_to_dict():
    d = filtration_report(sym(Q2.from_int(5))).to_dict()
    assert d["level"] == 2 and d["q"] == 1 and d["audit"]


# --- the k_1 oracle ----------------------------------------------------------

K1_EXPECTED = {
    "q2": (3, {0: 1, 1: 1, 2: 1}),
    "q3": (2, {0: 1, 1: 1}),
    "q5": (2, {0: 1, 1: 1}),
    "q2_sqrt2": (4, {0: 1, 1: 1, 2: 0, 3: 1, 4: 1}),
    "q3_zeta3": (4, None),
    "q4": (4, None),
    "q2_i": (4, None),
}


@pytest.mark.parametrize("name", sorted(K1_EXPECTED))
def test_k1_oracle(name):
    K = shipped_field(name)
    total, gr = K1_EXPECTED[name]
    got = k1_brute_oracle(K)
    assert got["total"] == total == expected_k1_dim(K)
    assert sum(got["gr"].values()) == total
    if gr is not None:
        for m, dim in gr.items():
            assert got["gr"][m] == dim
        assert all(v == 0 for m, v in got["gr"].items() if m not in gr)


def test_kummer_quotient_pth_powers():
    K = shipped_field("q2_sqrt2")
    Kq = kummer_quotient(K)
    rng = random.Random(3)
    for _ in range(50):
        x = K.random_element(rng)
        assert Kq.is_pth_power(x * x)
    assert not Kq.is_pth_power(K.pi())


# --- the q = 2 engine against the Hilbert symbol ------------------------------

def _random_pairs(K, n, seed):
    rng = random.Random(seed)
    while n:
        a, b = K.random_element(rng), K.random_element(rng)
        yield a, b
        n -= 1


@pytest.mark.parametrize("name", ZETA_FIELDS)
def test_engine_matches_hilbert_1000(name):
    K = shipped_field(name)
    mismatches, checked = [], 0
    for a, b in _random_pairs(K, 1000, seed=11):
        try:
            mine = filtration_report(sym(a, b), verify=False).trivial
        except PrecisionError:
            continue
        checked += 1
        if mine != hilbert_symbol(a, b).trivial:
            mismatches.append((a.serialize(), b.serialize()))
    assert checked >= 990
    assert mismatches == []


@pytest.mark.parametrize("name", ZETA_FIELDS + ["q4_sqrt2", "q5_zeta5"])
def test_pushing_identity_against_oracle(name):
    # {1-b, 1-a} = {-a(1-b)/(1-a), 1-ab}
    K = shipped_field(name)
    rng = random.Random(12)
    one = K.one()
    checked = 0
    while checked < 1000:
        a, b = K.random_principal_unit(rng, 1), K.random_principal_unit(rng, 1)
        A, B, C = one - a, one - b, one - a * b
        if A.is_zero() or B.is_zero() or C.is_zero():
            continue
        try:
            lhs = hilbert_symbol(B, A)
            rhs = hilbert_symbol(-a * B / A, C)
        except PrecisionError:
            continue
        checked += 1
        assert lhs == rhs


def test_report_verification_holds():
    rng = random.Random(5)
    for name in ("q2_sqrt2", "q3_zeta3"):
        K = shipped_field(name)
        for _ in range(30):
            a, b = K.random_element(rng), K.random_element(rng)
            rep = filtration_report(sym(a, b), verify=True)
            assert rep.level is None or "verified" in rep.audit[-1]


# --- proposition checks ------------------------------------------------------

@pytest.mark.parametrize("name", ["q2", "q3", "q2_sqrt2", "q3_zeta3"])
@pytest.mark.parametrize("q", [1, 2])
def test_proposition_check(name, q):
    rep = proposition_check(shipped_field(name), q, samples=20)
    assert rep["status"] == "pass"
    for c in rep["clauses"]:
        assert c["status"] in ("pass", "vacuous")


def test_proposition_q2_over_q2():
    rep = proposition_check(Q2, 2, samples=20)
    obs = {r["m"]: r["observed"] for r in rep["rows"]}
    assert obs == {0: 0, 1: 0, 2: 1, 3: 0}


def test_proposition_q2_over_q5_is_zero():
    rep = proposition_check(shipped_field("q5"), 2, samples=20)
    assert all(r["observed"] == 0 and r["expected"] == 0 for r in rep["rows"])


@pytest.mark.parametrize("name", ["q2", "q2_sqrt2", "q3_zeta3", "q5"])
def test_rho_properties(name):
    for q in (1, 2):
        assert rho_property_checks(shipped_field(name), q, samples=40)["pass"]
