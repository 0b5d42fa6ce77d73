"""Cohomological side for q <= 2: Hilbert symbol by norm enumeration,
field norms, and the Bockstein exactness check.

The norm group N_a = N(K(a^{1/p})^x) is found inside the finite space
V = K^x/(K^x)^p by pushing norms of elements x_0 + x_1 alpha + ... (with
alpha^p = a) into Kummer coordinates. Every computed norm is a genuine norm,
so the span is always contained in N_a; since N_a has index p, the search
can stop once the span is a hyperplane. The pairing matrix is assembled from
the hyperplanes of a basis of V and fixed by the skew symmetry of the symbol.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .milnor import SymbolSum, filtration_report, kummer_quotient, principal_part
from .padic import (LocalField, PadicElement, PrecisionError, unit_filtration_level,
                    zeta_p)


class OracleError(ValueError):
    """The oracle cannot answer for this field or input."""


@dataclass(frozen=True)
class MuPValue:
    """zeta_p^j."""

    p: int
    j: int

    def __post_init__(self):
        object.__setattr__(self, "j", self.j % self.p)

    def __mul__(self, other: MuPValue) -> MuPValue:
        if other.p != self.p:
            raise ValueError("values in different mu_p")
        return MuPValue(self.p, self.j + other.j)

    def inverse(self) -> MuPValue:
        return MuPValue(self.p, -self.j)

    @property
    def trivial(self) -> bool:
        return self.j == 0

    @property
    def sign(self) -> int:
        """+1 / -1 for p = 2."""
        if self.p != 2:
            raise ValueError("sign only makes sense in mu_2")
        return -1 if self.j else 1

    def serialize(self) -> str:
        return f"zeta^{self.j}"

    def __str__(self):
        return self.serialize()


# --- Kummer extensions --------------------------------------------------------

def _det(m):
    """Laplace expansion; entries support +, -, *."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for c in range(n):
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        term = m[0][c] * _det(minor)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return total


class KummerExtension:
    """L = K(b^{1/p}) given by the radicand b, elements as K-coordinate tuples."""

    def __init__(self, K: LocalField, b: PadicElement, check: bool = True):
        self.K, self.b, self.p = K, K(b), K.p
        if self.b.is_zero():
            raise ValueError("radicand indistinguishable from zero")
        if check and kummer_quotient(K).is_pth_power(self.b):
            raise ValueError("radicand is a p-th power: K(b^{1/p}) is not a field")

    @property
    def degree(self) -> int:
        return self.p

    def multiplication_matrix(self, x) -> list:
        """Matrix of multiplication by sum x_i alpha^i on 1, alpha, ..., alpha^{p-1}."""
        p, K = self.p, self.K
        xs = [K(c) for c in x] + [K.zero()] * (p - len(x))
        cols = []
        for k in range(p):
            col = [K.zero()] * p
            for i, c in enumerate(xs):
                idx = i + k
                col[idx % p] = col[idx % p] + (c * self.b if idx >= p else c)
            cols.append(col)
        return [[cols[k][i] for k in range(p)] for i in range(p)]

    def norm(self, x) -> PadicElement:
        return _det(self.multiplication_matrix(x))

    def ramified(self) -> bool:
        """True unless b is (up to p-th powers) an unramified radicand at level e'."""
        K = self.K
        if self.b.valuation() % self.p:
            return True
        kq = kummer_quotient(K)
        c = kq.coords(self.b)
        # the unramified class spans gr_{e'} when zeta_p is in K
        if not K.eprime_integral:
            return True
        top = [g for m, _, g in kq.candidates if m >= int(K.eprime)]
        rows = [kq.coords(g) for g in top]
        return not linalg.in_span(rows, c, self.p) if rows else True

    def induced_descriptor(self) -> LocalField:
        """Descriptor of L for the shapes this artifact supports (base with e = 1)."""
        K, p = self.K, self.p
        if K.e != 1:
            raise NotImplementedError("unsupported extension shape: ramified base")
        if not self.ramified():
            return LocalField(p, K.f * p, name=f"{K.name}(b^(1/{p}))")
        v = self.b.valuation()
        if K.f == 1 and v % p == 1:
            b1 = self.b / K(p) ** (v - 1)
            coeff = b1.unit[0] * p % p ** (K.N + 1)
            return LocalField(p, 1, [-coeff] + [0] * (p - 1) + [1], name=f"{K.name}(b^(1/{p}))")
        raise NotImplementedError("unsupported extension shape")


# --- norm subgroups and the Hilbert pairing --------------------------------------

def _norm_candidates(K: LocalField, rng: random.Random, exhaustive_T: int | None):
    p = K.p
    if exhaustive_T is not None:
        reps = [K.from_coords(c, exhaustive_T) if any(c) else K.zero()
                for c in itertools.product(*[range(m) for m in K._mods(exhaustive_T)])]
        for tup in itertools.product(reps, repeat=p):
            if all(x.is_zero() or x.val >= 1 for x in tup):
                continue
            yield tup
        return
    while True:
        tup = []
        for _ in range(p):
            r = rng.random()
            if r < 0.2:
                tup.append(K.zero())
            else:
                tup.append(K.pi() ** rng.randint(0, 2) * K.random_unit(rng))
        yield tuple(tup)


def norm_subgroup(K: LocalField, a: PadicElement, exhaustive_T: int | None = None,
                  seed: int = 0, max_tries: int = 5000) -> np.ndarray:
    """Rows spanning the image of N(K(a^{1/p})^x) in K^x/(K^x)^p.

    Random search (seeded) stops at codimension one; with ``exhaustive_T``
    all primitive coordinate tuples modulo pi^T are used and nothing is
    assumed about the index.
    """
    kq = kummer_quotient(K)
    ext = KummerExtension(K, a)
    p, n = K.p, kq.dim
    rows = []
    rank = 0
    rng = random.Random(seed)
    tries = 0
    for tup in _norm_candidates(K, rng, exhaustive_T):
        tries += 1
        if exhaustive_T is None and tries > max_tries:
            break
        try:
            nm = ext.norm(tup)
            if nm.is_zero():
                continue
            c = kq.coords(nm)
        except PrecisionError:
            continue
        new = not linalg.in_span(rows, c, p) if rows else bool(np.any(c))
        if new:
            rows.append(c)
            rank += 1
            if exhaustive_T is None and rank == n - 1:
                break
    return np.array(rows, dtype=np.int64).reshape(-1, n)


def norm_functional(K: LocalField, a: PadicElement, **kw) -> np.ndarray:
    rows = norm_subgroup(K, a, **kw)
    ker = linalg.nullspace(rows, K.p) if len(rows) else np.eye(kummer_quotient(K).dim, dtype=np.int64)
    if len(ker) != 1:
        raise PrecisionError(f"norm group of codimension {len(ker)} found; enlarge the search or N")
    return ker[0]


def is_norm(K: LocalField, b: PadicElement, a: PadicElement, **kw) -> bool:
    """Whether b is a norm from K(a^{1/p}) (directly by enumeration)."""
    kq = kummer_quotient(K)
    if kq.is_pth_power(a):
        return True
    f = norm_functional(K, a, **kw)
    return int(f @ kq.coords(b)) % K.p == 0


@lru_cache(maxsize=None)
def hilbert_matrix(K: LocalField) -> np.ndarray:
    """B with (x, y) = zeta^{coords(x) B coords(y)}.

    Normalized so that (1 + (1 - zeta)^p lambda(c), pi) = zeta^{Tr c}.
    """
    z = zeta_p(K)
    if z is None:
        raise OracleError(f"{K.name} does not contain zeta_{K.p}")
    kq = kummer_quotient(K)
    p, n = K.p, kq.dim
    F = np.array([norm_functional(K, g) for g in kq.basis_elements()], dtype=np.int64)
    # B[i] = c_i F[i] with B skew (p odd) or symmetric (p = 2)
    sign = 1 if p == 2 else -1
    eqs = []
    for i in range(n):
        for j in range(i + 1, n):
            row = np.zeros(n, dtype=np.int64)
            row[i] += F[i, j]
            row[j] -= sign * F[j, i]
            eqs.append(row % p)
    sol = linalg.nullspace(np.array(eqs).reshape(-1, n), p) if eqs else np.ones((1, n), dtype=np.int64)
    if len(sol) > 1:
        # bilinearity: the hyperplane of a_i a_j is cut out by c_i f_i + c_j f_j
        basis = kq.basis_elements()
        for i, j in itertools.combinations(range(n), 2):
            g = norm_functional(K, basis[i] * basis[j])
            k = int(np.nonzero(g)[0][0])
            for t in range(n):
                row = np.zeros(n, dtype=np.int64)
                row[i] = g[k] * F[i, t] - F[i, k] * g[t]
                row[j] = g[k] * F[j, t] - F[j, k] * g[t]
                eqs.append(row % p)
        sol = linalg.nullspace(np.array(eqs).reshape(-1, n), p)
    if len(sol) != 1 or np.any(sol[0] % p == 0):
        raise OracleError("norm hyperplanes are not consistent with a nondegenerate pairing")
    B = (sol[0][:, None] * F) % p
    ff = K.residue_field.ff
    for cval in range(1, ff.q):
        tr = ff.trace(cval) % p
        if tr:
            break
    else:
        raise OracleError("no residue of nonzero trace")
    u = K.one() + (K.one() - z) ** p * K.teichmuller(cval)
    got = int(kq.coords(u) @ B @ kq.coords(K.pi())) % p
    if got == 0:
        raise OracleError("normalizing symbol is trivial")
    scale = tr * pow(got, -1, p) % p
    return (B * scale) % p


def hilbert_symbol(a, b) -> MuPValue:
    """The degree-p Hilbert symbol (a, b) of K (zeta_p in K required)."""
    K = a.field
    a, b = K(a), K(b)
    if a.is_zero() or b.is_zero():
        raise ValueError("Hilbert symbol of zero")
    B = hilbert_matrix(K)
    kq = kummer_quotient(K)
    return MuPValue(K.p, int(kq.coords(a) @ B @ kq.coords(b)))


def symbol_value(S: SymbolSum) -> MuPValue:
    """Hilbert value of a q = 2 symbol sum."""
    if S.q != 2:
        raise ValueError("Hilbert values are defined for q = 2")
    out = MuPValue(S.field.p, 0)
    for c, (a, b) in S.terms:
        out = out * MuPValue(S.field.p, c * hilbert_symbol(a, b).j)
    return out


def hilbert_q2_closed(a: PadicElement, b: PadicElement) -> int:
    """Classical formula over Q_2, used only as a cross-check."""
    K = a.field
    if (K.p, K.e, K.f) != (2, 1, 1):
        raise OracleError("closed formula only over Q_2")
    if K.N < 3:
        raise PrecisionError("need precision >= 3")
    al, u = a.valuation(), a.unit_part().unit[0] % 8
    be, v = b.valuation(), b.unit_part().unit[0] % 8
    eps = lambda x: (x - 1) // 2 % 2
    om = lambda x: (x * x - 1) // 8 % 2
    e = (eps(u) * eps(v) + al * om(v) + be * om(u)) % 2
    return -1 if e else 1


# --- absolute norms -----------------------------------------------------------

def _bareiss(m: list) -> int:
    m = [list(r) for r in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


class AbsoluteExtension:
    """L over the base Q_p (same p), norms via the Z_p-matrix of multiplication."""

    def __init__(self, L: LocalField, K: LocalField | None = None):
        K = K or LocalField(L.p, precision=max(3, L.N // L.e))
        if K.e != 1 or K.f != 1 or K.p != L.p:
            raise NotImplementedError("unsupported extension shape: base must be Q_p")
        self.L, self.K = L, K

    @property
    def degree(self) -> int:
        return self.L.degree

    def _int_det(self, coords, r: int | None = None) -> int:
        L = self.L
        cols = []
        for b in range(L.n):
            basis = [0] * L.n
            basis[b] = 1
            prod = L._mul(coords, basis)
            cols.append(prod if r is None else [c % L.p**r for c in prod])
        mat = [[cols[j][i] for j in range(L.n)] for i in range(L.n)]
        return _bareiss(mat)

    def norm(self, x: PadicElement) -> PadicElement:
        L, K = self.L, self.K
        x = L(x)
        if x.is_zero():
            raise ValueError("norm of zero")
        v = x.valuation()
        r = max(1, x.prec // L.e)
        du = self._int_det(list(x.unit), r) % L.p**r
        dpi = self._int_det(list(L._pi_int()))
        unit = K.from_coords([du], min(r, K.N))
        return K(dpi) ** v * unit if v >= 0 else unit / K(dpi) ** (-v)

    def restrict(self, y: PadicElement) -> PadicElement:
        """The inclusion K -> L."""
        L, K = self.L, self.K
        y = K(y)
        v, u = y.valuation(), y.unit_part()
        prec = min(L.N, u.prec * L.e)
        return L.from_coords([u.unit[0]] + [0] * (L.n - 1), prec) * L(L.p) ** v


def cor_res_check(ext, q: int, samples: int = 100, seed: int = 0) -> dict:
    """q = 1: N(res y) = y^[L:K]; q = 2: (x, res y)_L = (N x, y)_K."""
    rng = random.Random(seed)
    K = ext.K
    fails, checked = [], 0
    if q == 1:
        d = ext.degree
        for _ in range(samples):
            y = K.random_element(rng, -2, 3)
            if isinstance(ext, KummerExtension):
                lhs = ext.norm((y,))
            else:
                lhs = ext.norm(ext.restrict(y))
            checked += 1
            if not (lhs == y**d):
                fails.append(y.serialize())
    elif q == 2:
        if not isinstance(ext, AbsoluteExtension):
            raise NotImplementedError("projection formula checked for absolute extensions")
        L = ext.L
        if zeta_p(L) is None or zeta_p(K) is None:
            raise OracleError("both fields must contain zeta_p")
        for _ in range(samples):
            x = L.random_element(rng, -1, 2)
            y = K.random_element(rng, -1, 2)
            lhs = hilbert_symbol(x, ext.restrict(y))
            rhs = hilbert_symbol(ext.norm(x), y)
            checked += 1
            if lhs != rhs:
                fails.append((x.serialize(), y.serialize()))
    else:
        raise ValueError("q must be 1 or 2")
    return {"checked": checked, "failures": fails, "pass": checked > 0 and not fails}


def norm_triviality_check(K: LocalField, samples: int = 50, seed: int = 0) -> dict:
    """(a, N_{K(a^{1/p})/K}(x)) = 1 for random a and x."""
    rng = random.Random(seed)
    kq = kummer_quotient(K)
    fails, checked = [], 0
    while checked < samples:
        a = K.random_element(rng, -1, 2)
        if kq.is_pth_power(a):
            continue
        ext = KummerExtension(K, a, check=False)
        x = [K.random_element(rng, 0, 2) for _ in range(K.p)]
        try:
            nm = ext.norm(x)
            if nm.is_zero():
                continue
            val = hilbert_symbol(a, nm)
        except PrecisionError:
            continue
        checked += 1
        if not val.trivial:
            fails.append((a.serialize(), nm.serialize()))
    return {"checked": checked, "failures": fails, "pass": checked > 0 and not fails}


# --- Bockstein ----------------------------------------------------------------

class _PowerQuotient:
    """K^x / (K^x)^n for n = p^k, principal units enumerated modulo pi^T.

    K^x = pi^Z x mu_{q-1} x U_1 and mu_{q-1} has order prime to p, so only
    the valuation mod n and the principal part matter.
    """

    def __init__(self, K: LocalField, n: int, T: int):
        self.K, self.n, self.T = K, n, T
        units = [K.from_coords(c, T) for c in K.principal_units_mod(T)]
        self.units = units
        powers = {}
        for u in units:
            y = u**n
            powers.setdefault(self.ukey(y), y)
        self.powers = list(powers.values())
        self._coset = {}
        for u in units:
            k = self.ukey(u)
            if k not in self._coset:
                rep = min(self.ukey(u * h) for h in self.powers)
                for h in self.powers:
                    self._coset[self.ukey(u * h)] = rep
        self.unit_classes = sorted(set(self._coset.values()))

    def ukey(self, u):
        return self.K._reduce(u.unit, self.T)

    def key(self, x: PadicElement):
        return (x.valuation() % self.n, self._coset[self.ukey(principal_part(x))])

    def elements(self):
        K = self.K
        reps = {}
        for u in self.units:
            reps.setdefault(self._coset[self.ukey(u)], u)
        for v in range(self.n):
            for rep in self.unit_classes:
                yield K.pi() ** v * reps[rep]

    def __len__(self):
        return self.n * len(self.unit_classes)


def bockstein_exactness_check(K: LocalField, n: int = 2, T: int | None = None) -> dict:
    """Exactness of K^x/p --(x^p)--> K^x/p^2 --(mod p)--> K^x/p for p = 2, n = 2.

    Principal units are enumerated mod pi^T.  U_{3e+1} lies in (U_1)^4, so
    any T >= 3e+1 is exact; the default goes to pi^7 when f = 1.
    """
    if K.p != 2 or n != 2:
        raise OracleError("Bockstein check implemented for p = 2, n = 2")
    if T is None:
        T = max(3 * K.e + 1, 7) if K.f == 1 else 3 * K.e + 1
    if T < 3 * K.e + 1:
        raise OracleError(f"Bockstein check needs T >= {3 * K.e + 1}")
    if T > K.N:
        raise PrecisionError(f"Bockstein check needs precision {T}")
    big = _PowerQuotient(K, 4, T)
    small = _PowerQuotient(K, 2, T)
    big_elems = list(big.elements())
    small_elems = list(small.elements())
    one_big, one_small = big.key(K.one()), small.key(K.one())
    image_mod = {small.key(x) for x in big_elems}
    ker_mod = {big.key(x) for x in big_elems if small.key(x) == one_small}
    im_times = {big.key(x * x) for x in small_elems}
    ker_times = {small.key(x) for x in small_elems if big.key(x * x) == one_big}
    minus_one_span = {small.key(K.one()), small.key(-K.one())}
    checks = {
        "T": T,
        "order_mod4": len(big),
        "order_mod2": len(small),
        "mod2_surjective": image_mod == {small.key(x) for x in small_elems},
        "kernel_mod2_equals_image_times2": ker_mod == im_times,
        "kernel_size": len(ker_mod),
        "kernel_times2_equals_minus_one_classes": ker_times == minus_one_span,
    }
    checks["pass"] = (checks["mod2_surjective"] and checks["kernel_mod2_equals_image_times2"]
                      and checks["kernel_times2_equals_minus_one_classes"])
    return checks


# --- Brauer anchor --------------------------------------------------------------

def p_brauer_anchor(K: LocalField) -> dict:
    """A symbol {1 + pi^{e'} lambda(c), pi} at level e' with Hilbert value zeta."""
    if zeta_p(K) is None:
        raise OracleError(f"{K.name} does not contain zeta_p")
    if not K.eprime_integral:
        raise OracleError("e' is not an integer")
    ep = int(K.eprime)
    for c in range(1, K.residue_field.q):
        a = K.one() + K.pi() ** ep * K.teichmuller(c)
        val = hilbert_symbol(a, K.pi())
        if val.j == 1:
            rep = filtration_report(SymbolSum.symbol(a, K.pi()))
            return {
                "a": a.serialize(), "b": K.pi().serialize(), "residue": c,
                "unit_level": unit_filtration_level(a), "symbol_level": rep.level,
                "value": val.serialize(),
                "pass": rep.level == ep and unit_filtration_level(a) == ep,
            }
    return {"pass": False, "reason": "no level-e' symbol with value zeta found"}


# --- k_2 through the oracle -----------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_extension(K: LocalField) -> AbsoluteExtension | None:
    """K(zeta_p)/K for K = Q_p without zeta_p; None when zeta_p is already in K."""
    if zeta_p(K) is not None:
        return None
    if K.e != 1 or K.f != 1:
        raise OracleError("no zeta_p oracle for this field")
    p = K.p
    # Phi_p(x + 1) = sum_k binom(p, k) x^{k-1}
    poly = [math.comb(p, k) for k in range(1, p + 1)]
    L = LocalField(p, 1, poly, name=f"Q_{p}(zeta_{p})")
    return AbsoluteExtension(L, K)


def k2_value(a: PadicElement, b: PadicElement) -> MuPValue:
    """Hilbert value of {a, b}, computed in K(zeta_p) when zeta_p is not in K.

    res: k_2(K) -> k_2(K(zeta_p)) is injective since the degree is prime to p.
    """
    ext = cyclotomic_extension(a.field)
    if ext is None:
        return hilbert_symbol(a, b)
    return hilbert_symbol(ext.restrict(a), ext.restrict(b))


def k2_trivial(S: SymbolSum) -> bool:
    out = 0
    for c, (a, b) in S.terms:
        out += c * k2_value(a, b).j
    return out % S.field.p == 0


def k2_graded_dims(K: LocalField) -> dict[int, int]:
    """dim gr_m k_2(K) measured by Hilbert values of {U_m, K^x}."""
    kq = kummer_quotient(K)
    ys = kq.basis_elements()

    def span(gens):
        return 1 if any(not k2_value(g, y).trivial for g in gens for y in ys) else 0

    top = math.ceil(K.eprime) + 1
    u = {0: span(ys)}
    for m in range(1, top + 2):
        u[m] = span(kq.level_generators(m))
    return {m: u[m] - u[m + 1] for m in range(top + 1)}
