"""Symbols in k_q(K) = K_q(K)/p for q in {1, 2} and their filtration.

A symbol sum is reduced to a canonical state: for q = 1 a single element
pi^v * lambda * u (lambda Teichmüller, u a principal unit); for q = 2 a
principal unit P standing for {P, pi} together with a list of pairs
{A, B} of principal units. Teichmüller entries vanish mod p because they
have order prime to p.

The state is then pushed up the filtration, lowest level first:

* {A, B} with A in U_j, B in U_i is rewritten with
  {1-b, 1-a} = {-a(1-b)/(1-a), 1-ab}, which moves its level-(i+j) part
  into the pi-slot and leaves a pair of strictly larger level;
* {1 + pi^n x, pi} with p not dividing n is exchanged for
  {1 + pi^n x, eps} (eps = -1 for p = 2, trivial otherwise) via
  {u, -u} = 0, again of strictly larger level;
* p-th powers are peeled off when p | n < e' and at n = e' when the
  leading residue lies in the image of d -> d^p + a d.

Whatever survives at n = e' is the graded class; anything above e' is
declared trivial, which is where the vanishing of gr_m for m > e' is used
as an algorithmic step (flagged in the audit trail).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import linalg
from .forms import (ABOVE_EPRIME, AT_EPRIME, DIVISIBLE_BY_P, PRIME_TO_P, ZERO_LEVEL,
                    DifferentialForm, GradedClass, RamificationData, graded_model, regime)
from .padic import (LocalField, PadicElement, PrecisionError, leading_residue,
                    solve_artin_schreier)
from .residue import ResidueElement


class UndecidedAtPrecision(PrecisionError):
    """The rewrite exhausted the working precision below level e'."""


def ramification(K: LocalField) -> RamificationData:
    return RamificationData(K.p, K.e, K.eprime_constant_a())


def principal_part(x: PadicElement) -> PadicElement:
    """x / (pi^v * lambda(residue)), a principal unit."""
    u = x.unit_part()
    return u / x.field.teichmuller(u.residue())


def split(x: PadicElement) -> tuple[int, PadicElement]:
    return x.valuation(), principal_part(x)


def level(u: PadicElement) -> int:
    """Filtration level of a principal unit; errors when undetermined below e'."""
    K = u.field
    z = u - K.one()
    if z.is_zero():
        if z.val <= K.eprime:
            raise UndecidedAtPrecision(f"unit known only to pi^{z.val}, at or below e' = {K.eprime}")
        return z.val
    return z.val


def _is_one(u: PadicElement) -> bool:
    return (u - u.field.one()).is_zero()


# --- symbol sums --------------------------------------------------------------

@dataclass
class SymbolSum:
    """sum of coef * {x_1, ..., x_q}."""

    field: LocalField
    q: int
    terms: list = dc_field(default_factory=list)

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be at least 1")
        clean = []
        for coef, entries in self.terms:
            entries = tuple(self.field(x) for x in entries)
            if len(entries) != self.q:
                raise ValueError(f"symbol with {len(entries)} entries in K_{self.q}")
            for x in entries:
                if x.is_zero():
                    raise ValueError("symbol entry indistinguishable from zero")
            clean.append((int(coef), entries))
        self.terms = clean

    @classmethod
    def symbol(cls, *entries, coef: int = 1) -> SymbolSum:
        K = next(x.field for x in entries if isinstance(x, PadicElement))
        return cls(K, len(entries), [(coef, entries)])

    def _check(self, other):
        if other.field is not self.field or other.q != self.q:
            raise ValueError("symbol sums over different fields or degrees")

    def __add__(self, other: SymbolSum) -> SymbolSum:
        self._check(other)
        return SymbolSum(self.field, self.q, self.terms + other.terms)

    def scale(self, c: int) -> SymbolSum:
        return SymbolSum(self.field, self.q, [(c * k, e) for k, e in self.terms])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: SymbolSum) -> SymbolSum:
        return self + (-other)

    def __len__(self):
        return len(self.terms)

    def serialize(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{{{', '.join(x.serialize() for x in e)}}}" for c, e in self.terms)


# --- lifting maps -------------------------------------------------------------

def _residue_of(K: LocalField, x) -> ResidueElement:
    if isinstance(x, ResidueElement):
        return x
    return K.residue_element(int(x))


def rho_0(K: LocalField, q: int, xi=(), eta=(), pi: PadicElement | None = None) -> SymbolSum:
    """Lift ({x_1..x_q}, {y_1..y_{q-1}}) to {x~} + {y~, pi}.

    ``xi`` and ``eta`` are lists of residue tuples; for q = 1, ``eta`` may be
    an integer n standing for n times the generator of k_0 = Z/p.
    """
    pi = K.pi() if pi is None else pi
    terms = []
    if isinstance(eta, int):
        eta = [()] * (eta % K.p)
    for sym in xi:
        sym = tuple(_residue_of(K, x) for x in sym)
        if len(sym) != q:
            raise ValueError(f"x-part must have {q} entries")
        if any(x.is_zero() for x in sym):
            raise ValueError("zero residue entry")
        terms.append((1, tuple(K.teichmuller(x) for x in sym)))
    for sym in eta:
        sym = tuple(_residue_of(K, x) for x in sym)
        if len(sym) != q - 1:
            raise ValueError(f"y-part must have {q - 1} entries")
        if any(x.is_zero() for x in sym):
            raise ValueError("zero residue entry")
        terms.append((1, tuple(K.teichmuller(x) for x in sym) + (pi,)))
    return SymbolSum(K, q, terms)


def _degree0_value(K: LocalField, w, degree: int):
    """The function behind a degree-0 form (r = 0 residue fields only have those)."""
    if w is None:
        return None
    if isinstance(w, ResidueElement):
        w = DifferentialForm.function(w)
    if w.degree != degree:
        raise ValueError(f"expected a {degree}-form, got degree {w.degree}")
    if w.is_zero():
        return None
    if degree != 0:
        raise ValueError("nonzero forms of positive degree need indeterminates in the residue field")
    return w.terms[()]


def rho_m(K: LocalField, q: int, m: int, omega1=None, omega2=None, lift=None) -> SymbolSum:
    """(x dlog y_1..., 0) -> {1 + pi^m x~, y~...}; (0, x ...) -> {1 + pi^m x~, y~..., pi}."""
    if not 1 <= m <= K.N - 1:
        raise ValueError(f"m = {m} outside 1..N-1 = {K.N - 1}")
    lift = lift or K.teichmuller
    pim = K.pi() ** m
    terms = []
    x = _degree0_value(K, omega1, q - 1)
    if x is not None:
        terms.append((1, (K.one() + pim * lift(x),)))
    if q >= 2:
        y = _degree0_value(K, omega2, q - 2)
        if y is not None:
            terms.append((1, (K.one() + pim * lift(y), K.pi())))
    return SymbolSum(K, q, terms)


def rho_class(cls: GradedClass, K: LocalField) -> SymbolSum:
    """rho~_m applied to a graded class (its chosen representative forms)."""
    model = cls.model
    if model.regime == ZERO_LEVEL:
        xi_form, eta_form = cls.components
        xi = []
        if not xi_form.is_zero():
            raise ValueError("nonzero nu_q component over a finite residue field")
        eta = eta_form.terms.get(()) if eta_form.degree == 0 else None
        n = 0 if eta is None else eta.constant_value
        if model.q == 1:
            return rho_0(K, 1, xi, n)
        if eta_form.degree == 1 and not eta_form.is_zero():
            raise ValueError("nonzero nu_{q-1} component over a finite residue field")
        return SymbolSum(K, model.q)
    if model.regime == ABOVE_EPRIME:
        return SymbolSum(K, model.q)
    comps = list(cls.components) + [None] * (2 - len(cls.components))
    return rho_m(K, model.q, model.m, comps[0], comps[1])


# --- normal form ----------------------------------------------------------------

@dataclass
class _State:
    K: LocalField
    q: int
    v: int = 0                      # q = 1: pi-exponent mod p
    P: PadicElement | None = None   # q = 1: the unit; q = 2: {P, pi}
    pairs: list = dc_field(default_factory=list)
    audit: list = dc_field(default_factory=list)


def _pow(x: PadicElement, c: int) -> PadicElement:
    return x ** (c % x.field.p)


def _steinberg_trivial(a: PadicElement, b: PadicElement) -> bool:
    K = a.field
    return (a + b - K.one()).is_zero() or (a + b).is_zero()


def _state(S: SymbolSum) -> _State:
    K, p = S.field, S.field.p
    st = _State(K, S.q, P=K.one())
    if S.q == 1:
        for c, (x,) in S.terms:
            c %= p
            if not c:
                continue
            v, u = split(x)
            st.v = (st.v + c * v) % p
            st.P = st.P * _pow(u, c)
        return st
    if S.q != 2:
        raise ValueError("symbol engine supports q in {1, 2} only")
    minus_one = principal_part(K(-1))
    for c, (a, b) in S.terms:
        c %= p
        if not c:
            continue
        if _steinberg_trivial(a, b):
            st.audit.append("drop Steinberg/alternating symbol")
            continue
        i, A = split(a)
        j, B = split(b)
        # {pi^i A, pi^j B} = ij{pi,-1} - i{B,pi} + j{A,pi} + {A,B}
        k = (c * i * j) % p
        if k and not _is_one(minus_one):
            st.P = st.P * _pow(minus_one, -k)
        if (c * i) % p:
            st.P = st.P * _pow(B, -c * i)
        if (c * j) % p:
            st.P = st.P * _pow(A, c * j)
        if not _is_one(A) and not _is_one(B):
            st.pairs.append((_pow(A, c), B))
    return st


def normalize(S: SymbolSum) -> SymbolSum:
    """Canonical representative: {pi}^v {u} for q = 1, {P, pi} + sum {A, B} for q = 2."""
    st = _state(S)
    K, q = S.field, S.q
    terms = []
    if q == 1:
        if st.v:
            terms.append((st.v, (K.pi(),)))
        if not _is_one(st.P):
            terms.append((1, (st.P,)))
        return SymbolSum(K, 1, terms)
    if not _is_one(st.P):
        terms.append((1, (st.P, K.pi())))
    pairs = sorted(st.pairs, key=lambda ab: (ab[0].serialize(), ab[1].serialize()))
    terms.extend((1, ab) for ab in pairs)
    return SymbolSum(K, 2, terms)


# --- filtration ---------------------------------------------------------------

@dataclass
class FiltrationReport:
    q: int
    level: int | None           # None: trivial at precision
    graded_class: GradedClass | None
    audit: list

    @property
    def trivial(self) -> bool:
        return self.level is None

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "level": "trivial" if self.level is None else self.level,
            "class": None if self.graded_class is None else self.graded_class.serialize(),
            "audit": list(self.audit),
        }


def _model(K: LocalField, q: int, m: int):
    return graded_model(q, m, K.residue_field, ramification(K))


def _unit_class(K: LocalField, q: int, n: int, x: ResidueElement) -> GradedClass:
    """Class at level n >= 1 of {1 + pi^n x} (q = 1) or {1 + pi^n x, pi} (q = 2)."""
    model = _model(K, q, n)
    if q == 1:
        return model.make(x) if len(model.summands) == 1 else model.make(x, None)
    return model.make(None, x)


def _peel(K: LocalField, u: PadicElement, n: int, audit: list, q: int):
    """One step on a principal unit u at level n <= e'.

    Returns (new unit, class or None). The class is set when the leading
    term carries a nonzero graded class; otherwise u is divided by a
    p-th power (or, for q = 2 and p not dividing n, by the factor that
    is pushed to a higher pair; the caller handles that case).
    """
    p, e = K.p, K.e
    ff = K.residue_field.ff
    x = leading_residue(u, n)
    reg = regime(n, ramification(K))
    if reg == DIVISIBLE_BY_P:
        d = K.teichmuller(ff.root(x.constant_value))
        audit.append(f"level {n}: p | n, peel p-th power of 1 + pi^{n // p} [{ff.root(x.constant_value)}]")
        return u / (K.one() + K.pi() ** (n // p) * d) ** p, None
    if reg == AT_EPRIME:
        d = solve_artin_schreier(K, x)
        if d is None:
            audit.append(f"level {n} = e': residue {x.constant_value} outside image of d^p + a d")
            return u, _unit_class(K, q, n, x)
        audit.append(f"level {n} = e': residue {x.constant_value} = d^p + a d with d = {d.constant_value}, peel")
        return u / (K.one() + K.pi() ** (e // (p - 1)) * K.teichmuller(d)) ** p, None
    raise AssertionError("unreachable")


def filtration_report(S: SymbolSum, verify: bool = True) -> FiltrationReport:
    """Filtration level and graded class of a symbol sum in k_q(K), q in {1, 2}."""
    if S.q not in (1, 2):
        raise ValueError("filtration reports are only available for q in {1, 2}")
    K = S.field
    ep = K.eprime
    st = _state(S)
    audit = st.audit
    report = _run(st, audit)
    if verify and report.level is not None and report.level <= ep:
        rest = S - rho_class(report.graded_class, K)
        back = filtration_report(rest, verify=False)
        if back.level is not None and back.level <= report.level:
            raise AssertionError(f"graded class check failed: residual at level {back.level}")
        audit.append(f"verified: S - rho(class) has level > {report.level}")
    return report


def _run(st: _State, audit: list) -> FiltrationReport:
    K, q, p = st.K, st.q, st.K.p
    ep = K.eprime
    if q == 1:
        if st.v:
            model = _model(K, 1, 0)
            cls = model.make(DifferentialForm(K.residue_field, 1), K.residue_element(st.v))
            audit.append(f"level 0: pi-exponent {st.v} mod p")
            return FiltrationReport(1, 0, cls, audit)
        u = st.P
        while True:
            n = level(u)
            if n > ep:
                audit.append(f"level {n} > e' = {ep}: trivial (deep units are p-th powers)")
                return FiltrationReport(1, None, None, audit)
            if regime(n, ramification(K)) == PRIME_TO_P:
                x = leading_residue(u, n)
                audit.append(f"level {n}: p does not divide n, class {x.constant_value}")
                return FiltrationReport(1, n, _unit_class(K, 1, n, x), audit)
            u, cls = _peel(K, u, n, audit, 1)
            if cls is not None:
                return FiltrationReport(1, n, cls, audit)

    P, pairs = st.P, list(st.pairs)
    eps = principal_part(-K.one()) if p == 2 else None
    while True:
        levels = [level(A) + level(B) for A, B in pairs]
        nP = level(P)
        low = min(levels + [nP])
        if low > ep:
            audit.append(f"all terms above e' = {ep}: trivial (gr_m = 0 for m > e')")
            return FiltrationReport(2, None, None, audit)
        if levels and min(levels) == low:
            # unit-slot rewrite preferred on ties
            idx = levels.index(low)
            A, B = pairs.pop(idx)
            i = level(B)
            a = K.one() - B
            lam = K.teichmuller((-a).unit_part().residue())
            t1 = -a / (K.pi() ** i * lam)
            C = A + B - A * B
            if i % p:
                P = P * _pow(C, -i)
            new_first = t1 * A / B
            audit.append(f"pair at level {low}: push {{1-b,1-a}} -> pi-slot^{-i % p} and a pair above")
            if not _is_one(new_first) and not _is_one(C):
                pairs.append((new_first, C))
            continue
        n = nP
        if regime(n, ramification(K)) == PRIME_TO_P:
            x = leading_residue(P, n)
            F = K.one() + K.pi() ** n * K.teichmuller(x)
            P = P / F
            ninv = pow(n, -1, p)
            audit.append(f"pi-slot level {n}: {{F, pi}} = -n^-1 {{F, -x}}")
            if eps is not None:
                pairs.append((_pow(F, -ninv), eps))
            continue
        P, cls = _peel(K, P, n, audit, 2)
        if cls is not None:
            return FiltrationReport(2, n, cls, audit)


def is_trivial(S: SymbolSum) -> bool:
    return filtration_report(S, verify=False).trivial


# --- K^x / p ------------------------------------------------------------------

class KummerQuotient:
    """F_p-coordinates on K^x / (K^x)^p by exhaustive enumeration.

    U_1 / U_T (T = floor(e') + 1) is enumerated, the image of the p-th power
    map computed, and a basis of the quotient chosen greedily among the
    generators 1 + pi^m lambda(g^i). Units at level >= T are p-th powers, so
    the quotient equals U_1 / U_1^p.
    """

    def __init__(self, K: LocalField):
        self.K = K
        p, f = K.p, K.f
        self.T = math.floor(K.eprime) + 1
        T = self.T
        if K.N < T + K.e:
            raise PrecisionError("precision too small for the Kummer quotient")
        elems = [K.from_coords(c, T) for c in K.principal_units_mod(T)]
        self.order = len(elems)
        powers = {}
        for x in elems:
            y = x**p
            powers.setdefault(self.key(y), y)
        self.pth_powers = list(powers.values())
        self.candidates = []
        for m in range(1, T):
            for i in range(f):
                self.candidates.append((m, p**i, K.one() + K.pi() ** m * K.teichmuller(p**i)))
        basis = []
        group = dict(powers)
        for m, g, c in self.candidates:
            if self.key(c) in group:
                continue
            basis.append((m, g, c))
            new = {}
            cur = K.one()
            for _ in range(p):
                for y in group.values():
                    z = y * cur
                    new.setdefault(self.key(z), z)
                cur = cur * c
            group = new
        if len(group) != self.order:
            raise AssertionError("quotient basis does not exhaust U_1/U_T")
        self.basis = basis
        self.dim_units = len(basis)
        table = {}
        for coeffs in itertools.product(range(p), repeat=len(basis)):
            h = K.one()
            for c, (_, _, g) in zip(coeffs, basis):
                h = h * g**c
            for s in self.pth_powers:
                table[self.key(h * s)] = coeffs
        self.table = table

    @property
    def dim(self) -> int:
        return 1 + self.dim_units

    def key(self, u: PadicElement):
        if u.val != 0 or u.prec < self.T:
            raise PrecisionError("principal unit known to fewer than T digits")
        return self.K._reduce(u.unit, self.T)

    def coords(self, x: PadicElement) -> np.ndarray:
        v, u = split(x)
        return np.array((v % self.K.p,) + self.table[self.key(u)], dtype=np.int64)

    def is_pth_power(self, x: PadicElement) -> bool:
        return not np.any(self.coords(x))

    def element(self, coords) -> PadicElement:
        K = self.K
        out = K.pi() ** int(coords[0])
        for c, (_, _, g) in zip(coords[1:], self.basis):
            out = out * g ** int(c)
        return out

    def basis_elements(self) -> list[PadicElement]:
        return [self.K.pi()] + [g for _, _, g in self.basis]

    def level_generators(self, m: int) -> list[PadicElement]:
        """Generators of the image of U_m (m >= 1)."""
        return [g for mm, _, g in self.candidates if mm >= m]

    def graded_dims(self) -> dict[int, int]:
        p = self.K.p
        dims = {}
        span = {}
        for m in range(1, self.T + 1):
            gens = self.level_generators(m)
            rows = [self.coords(g) for g in gens]
            span[m] = linalg.span_dimension(np.array(rows).reshape(-1, self.dim), p) if rows else 0
        for m in range(1, self.T):
            dims[m] = span[m] - span[m + 1]
        dims[0] = self.dim - span[1]
        return dict(sorted(dims.items()))


@lru_cache(maxsize=None)
def kummer_quotient(K: LocalField) -> KummerQuotient:
    return KummerQuotient(K)


def k1_brute_oracle(K: LocalField) -> dict:
    """dim_{F_p} K^x/(K^x)^p and dim gr_m for every level m (zero above e')."""
    kq = kummer_quotient(K)
    gr = kq.graded_dims()
    top = math.ceil(K.eprime) + 1
    for m in range(top + 1):
        gr.setdefault(m, 0)
    return {"total": kq.dim, "gr": dict(sorted(gr.items()))}


def expected_k1_dim(K: LocalField) -> int:
    """1 + [K:Q_p] + (1 if zeta_p in K): the classical count."""
    from .padic import zeta_p
    return 1 + K.degree + (1 if zeta_p(K) is not None else 0)


# --- Proposition checks -----------------------------------------------------------

CLAUSES = {
    ZERO_LEVEL: "Prop(i)",
    PRIME_TO_P: "Prop(ii)",
    DIVISIBLE_BY_P: "Prop(iii)",
    AT_EPRIME: "Prop(iv)",
    ABOVE_EPRIME: "Prop(v)",
}


def _level_gt(S: SymbolSum, m: int) -> bool:
    rep = filtration_report(S)
    return rep.level is None or rep.level > m


def _random_residue(K: LocalField, rng, nonzero: bool = False) -> ResidueElement:
    lo = 1 if nonzero else 0
    return K.residue_element(rng.randrange(lo, K.residue_field.q))


def observed_graded_dims(K: LocalField, q: int) -> dict[int, int]:
    if q == 1:
        return k1_brute_oracle(K)["gr"]
    from .oracle import k2_graded_dims
    return k2_graded_dims(K)


def _sample_clause(K, q, reg, levels, rng, samples):
    """Sampled well-definedness / surjectivity evidence for one regime."""
    from .padic import pth_power_test
    ff = K.residue_field.ff
    a = K.eprime_constant_a().constant_value
    evidence = {"samples": 0, "failures": []}

    def record(ok, what):
        evidence["samples"] += 1
        if not ok:
            evidence["failures"].append(what)

    for m in levels:
        for _ in range(samples):
            x = _random_residue(K, rng, nonzero=True)
            if reg == ZERO_LEVEL:
                if q == 1:
                    rep = filtration_report(rho_0(K, 1, [(x,)], 1))
                    record(rep.level == 0, f"rho_0({x.constant_value}, 1) not at level 0")
                else:
                    y = _random_residue(K, rng, nonzero=True)
                    S = rho_0(K, 2, [(x, y)], [(y,)])
                    record(filtration_report(S).level != 0, "nonzero level-0 class over finite k")
            elif reg == PRIME_TO_P:
                if q == 1:
                    rep = filtration_report(rho_m(K, 1, m, x))
                    want = _unit_class(K, 1, m, x)
                    ok = rep.level == m and (rep.graded_class - want).is_zero()
                    record(ok, f"rho_{m}({x.constant_value}) class mismatch")
                else:
                    record(_level_gt(rho_m(K, 2, m, None, x), m), f"(0, {x.constant_value}) survives at p∤m")
            elif reg == DIVISIBLE_BY_P:
                # every 0-form over a finite field is closed
                record(_level_gt(rho_m(K, q, m, x if q == 1 else None, x if q == 2 else None), m),
                       f"Z_1 input {x.constant_value} at level {m}")
            elif reg == AT_EPRIME:
                z = x.constant_value
                w = K.residue_element(ff.add(z, ff.mul(a, ff.root(z))))
                S = rho_m(K, q, m, w if q == 1 else None, w if q == 2 else None)
                record(filtration_report(S).trivial, f"(1+aC)({z}) not trivial")
            else:
                S = rho_m(K, q, m, x if q == 1 else None, x if q == 2 else None)
                record(filtration_report(S).trivial, f"level {m} > e' input not trivial")
                u = K.one() + K.pi() ** m * K.random_unit(rng)
                y = pth_power_test(u)
                record(y is not None and y ** K.p == u, f"1 + pi^{m} u not a p-th power")
    return evidence


def proposition_check(K: LocalField, q: int, samples: int = 50, seed: int = 0) -> dict:
    """Graded dimensions and sampled clause checks for q in {1, 2}."""
    import random
    if q not in (1, 2):
        raise ValueError("proposition checks are available for q in {1, 2} only")
    rng = random.Random(seed)
    ram = ramification(K)
    ep = K.eprime
    top = math.ceil(ep) + 1
    observed = observed_graded_dims(K, q)
    rows = []
    for m in range(top + 1):
        reg = regime(m, ram)
        expected = graded_model(q, m, K.residue_field, ram).dimension()
        got = observed.get(m, 0)
        rows.append({"m": m, "regime": reg, "expected": expected, "observed": got,
                     "status": "pass" if expected == got else "fail"})
    clauses = []
    for reg, tag in CLAUSES.items():
        levels = [r["m"] for r in rows if r["regime"] == reg]
        label = f"{tag} q={q}"
        if not levels:
            clauses.append({"clause": label, "status": "vacuous",
                            "evidence": {"reason": "no level in this regime", "e'": str(ep)}})
            continue
        try:
            ev = _sample_clause(K, q, reg, levels, rng, samples)
        except PrecisionError as exc:
            clauses.append({"clause": label, "status": "undecided",
                            "evidence": {"levels": levels, "error": str(exc), "hint": "raise N"}})
            continue
        dims = {r["m"]: [r["expected"], r["observed"]] for r in rows if r["regime"] == reg}
        ok = all(r["status"] == "pass" for r in rows if r["regime"] == reg)
        ok = ok and not ev["failures"] and ev["samples"] > 0
        ev.update({"levels": levels, "dims[expected, observed]": dims})
        if reg == AT_EPRIME and q == 2:
            witness = None
            for c in range(1, K.residue_field.q):
                S = SymbolSum.symbol(K.one() + K.pi() ** levels[0] * K.teichmuller(c), K.pi())
                if not filtration_report(S).trivial:
                    witness = S.serialize()
                    break
            ev["witness"] = witness
            ok = ok and (witness is not None) == (dims[levels[0]][0] > 0)
        clauses.append({"clause": label, "status": "pass" if ok else "fail", "evidence": ev})
    status = "pass"
    if any(c["status"] == "fail" for c in clauses) or any(r["status"] == "fail" for r in rows):
        status = "fail"
    elif any(c["status"] == "undecided" for c in clauses):
        status = "undecided"
    return {"field": K.name, "q": q, "rows": rows, "clauses": clauses, "status": status}


def rho_property_checks(K: LocalField, q: int, samples: int = 100, seed: int = 0) -> dict:
    """Lift independence of rho_m and prime-element dependence of rho_0."""
    import random
    rng = random.Random(seed)
    top = min(math.ceil(K.eprime), K.N - 1)
    lift_fail, prime_fail = [], []
    for i in range(samples):
        m = 1 + i % top
        x = _random_residue(K, rng, nonzero=True)
        noise = K.pi() * K.random_unit(rng)
        other = lambda r, noise=noise: K.teichmuller(r) + noise
        if q == 1:
            S = rho_m(K, 1, m, x) - rho_m(K, 1, m, x, lift=other)
        else:
            S = rho_m(K, 2, m, None, x) - rho_m(K, 2, m, None, x, lift=other)
        if not _level_gt(S, m):
            lift_fail.append((m, x.constant_value))
        u = K.random_unit(rng)
        pi2 = u * K.pi()
        if q == 1:
            same = rho_0(K, 1, [(x,)], 0, pi=pi2) - rho_0(K, 1, [(x,)], 0)
            diff = rho_0(K, 1, [], 1, pi=pi2) - rho_0(K, 1, [], 1)
            predicted = SymbolSum.symbol(u)
        else:
            y = _random_residue(K, rng, nonzero=True)
            same = rho_0(K, 2, [(x, y)], [], pi=pi2) - rho_0(K, 2, [(x, y)], [])
            diff = rho_0(K, 2, [], [(y,)], pi=pi2) - rho_0(K, 2, [], [(y,)])
            predicted = SymbolSum.symbol(K.teichmuller(y), u)
        # the x-parts agree; the y-parts differ by {y~, u}, whose level-0 part
        # {y, u-bar} vanishes in k_q of a finite field
        if not filtration_report(same).trivial:
            prime_fail.append(("same", x.constant_value))
        if not filtration_report(diff - predicted).trivial:
            prime_fail.append(("diff != {y, u}", x.constant_value))
        if filtration_report(diff).level == 0:
            prime_fail.append(("diff at level 0", x.constant_value))
    return {
        "lift_independence": {"samples": samples, "failures": lift_fail},
        "prime_dependence": {"samples": samples, "failures": prime_fail},
        "pass": samples > 0 and not lift_fail and not prime_fail,
    }
