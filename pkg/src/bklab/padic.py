"""Precision-tracked arithmetic in finite extensions K of Q_p.

K is modelled as Z_q[pi] / (E(pi)) with Z_q = Z_p[x] / (g(x)) unramified of
degree f and E Eisenstein of degree e over Z_q. Integral elements are
integer coordinate vectors on the basis x^i pi^j (i < f, j < e); an ideal
pi^A O_K is cut out coordinatewise, so reduction mod pi^A is canonical.

Nonzero elements are stored in floating form pi^v * u with u a unit known
modulo pi^prec (relative precision). An element that cannot be told apart
from zero carries a zero marker together with the power of pi it is known
to be divisible by.
"""

from __future__ import annotations

import json
import math
import random
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .residue import CONWAY, ResidueElement, ResidueField, is_prime

ZERO_EXACT = 10**6


class PrecisionError(ArithmeticError):
    """Working precision is too small for the requested computation."""


def _vp(n: int, p: int) -> int:
    if n == 0:
        return ZERO_EXACT
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class LocalField:
    """Descriptor of K = Q_q(pi), pi a root of an Eisenstein polynomial."""

    def __init__(self, p: int, f: int = 1, eisenstein=None, unramified_poly=None,
                 precision: int | None = None, name: str | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p, self.f = p, f
        if unramified_poly is None:
            unramified_poly = CONWAY.get((p, f))
            if unramified_poly is None:
                raise ValueError(f"no shipped unramified polynomial for p={p}, f={f}")
        unram = [int(c) for c in unramified_poly]
        if len(unram) != f + 1 or unram[-1] != 1:
            raise ValueError("unramified polynomial must be monic of degree f")
        self.unramified_poly = tuple(unram)
        self.residue_field = ResidueField(p, f, 0, modulus=[c % p for c in unram])
        if eisenstein is None:
            eisenstein = [-p, 1]
        coeffs = [self._zq_from(c) for c in eisenstein]
        if coeffs[-1] != self._zq_from(1) or len(coeffs) < 2:
            raise ValueError("Eisenstein polynomial must be monic of degree >= 1")
        self.e = len(coeffs) - 1
        self.eisenstein = tuple(tuple(c) for c in coeffs)
        for c in coeffs[:-1]:
            if any(x % p for x in c):
                raise ValueError("not Eisenstein: a non-leading coefficient is not divisible by p")
        if all((x // p) % p == 0 for x in coeffs[0]):
            raise ValueError("not Eisenstein: constant term divisible by p^2")
        self.eprime = Fraction(p * self.e, p - 1)
        self.eprime_integral = self.eprime.denominator == 1
        default = 3 * self.e + math.ceil(self.eprime) + 2
        self.N = default if precision is None else int(precision)
        if self.N < math.floor(2 * self.eprime) + self.e + 1:
            raise PrecisionError(f"precision {self.N} below floor(2e') + e + 1")
        self.M = -(-self.N // self.e) + 2
        self.n = self.e * self.f
        self.name = name or self._default_name()
        self._build()

    # --- construction helpers ---------------------------------------------
    def _default_name(self):
        base = f"Q_{self.p}" if self.f == 1 else f"Q_{self.p}^{self.f}"
        return base if self.e == 1 else f"{base}(pi: {list(self.eisenstein)})"

    def _zq_from(self, c):
        vec = [c] if isinstance(c, int) else list(c)
        return self._zq_reduce(vec + [0] * max(0, self.f - len(vec)))

    def _zq_reduce(self, vec):
        vec = list(vec)
        f, g = self.f, self.unramified_poly
        for d in range(len(vec) - 1, f - 1, -1):
            c = vec[d]
            if c:
                for i in range(f + 1):
                    vec[d - f + i] -= c * g[i]
        return vec[:f] + [0] * (f - len(vec[:f]))

    def _zq_mul(self, u, v):
        out = [0] * (2 * self.f - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    out[i + j] += a * b
        return self._zq_reduce(out)

    def _build(self):
        e, f, n = self.e, self.f, self.n
        zero = [0] * f
        one = self._zq_from(1)
        pipow = []
        for j in range(2 * e - 1):
            if j < e:
                vec = [list(zero) for _ in range(e)]
                vec[j] = list(one)
            else:
                prev = pipow[j - 1]
                top = prev[e - 1]
                vec = [list(zero)] + [list(c) for c in prev[:e - 1]]
                for i in range(e):
                    t = self._zq_mul(top, self.eisenstein[i])
                    vec[i] = [a - b for a, b in zip(vec[i], t)]
            pipow.append(vec)
        xpow = []
        for k in range(2 * f - 1):
            v = [0] * (2 * f - 1)
            v[k] = 1
            xpow.append(self._zq_reduce(v))
        table = []
        for a in range(n):
            ja, ia = divmod(a, f)
            row = []
            for b in range(n):
                jb, ib = divmod(b, f)
                flat = [0] * n
                for j, cj in enumerate(pipow[ja + jb]):
                    for i, c in enumerate(self._zq_mul(xpow[ia + ib], cj)):
                        flat[j * f + i] += c
                row.append([(i, c) for i, c in enumerate(flat) if c])
            table.append(row)
        self._table = table
        self._mods_cache: dict = {}
        # pi^{-1} = -S / a_0 with S = pi^{e-1} + a_{e-1} pi^{e-2} + ... + a_1, a_0 = p * w0
        s = [0] * n
        for j in range(e - 1):
            for i, c in enumerate(self.eisenstein[j + 1]):
                s[j * f + i] += c
        for i, c in enumerate(one):
            s[(e - 1) * f + i] += c
        w0 = [c // self.p for c in self.eisenstein[0]]
        w0_inv = self._zq_inverse(w0)
        w0_full = [0] * n
        w0_full[:f] = w0_inv
        self._neg_s_over_w0 = [-c for c in self._mul(s, w0_full)]
        self._one = tuple([1] + [0] * (n - 1))
        self._teich_cache: dict = {}
        # p / pi^e
        pc = [0] * n
        pc[0] = self.p
        z = pc
        for _ in range(e):
            z = self._div_pi(z)
        self._p_unit = self._reduce(z, self.N)
        # pi^k coordinates for shifting
        self._pi_shift = [self._one]
        pi_int = self._pi_int()
        for k in range(1, self.N + 1):
            self._pi_shift.append(self._reduce(self._mul(self._pi_shift[-1], pi_int), self.N))

    def _pi_int(self):
        if self.e > 1:
            v = [0] * self.n
            v[self.f] = 1
            return tuple(v)
        v = [0] * self.n
        v[0] = self.p
        return tuple(v)

    def _zq_inverse(self, w):
        mod = self.p ** (self.M + 1)
        ff = self.residue_field.ff
        r = ff.inv(ff.from_digits([c % self.p for c in w]))
        y = ff.digits(r)
        two = self._zq_from(2)
        for _ in range(self.M.bit_length() + 3):
            t = self._zq_mul(w, y)
            y = [c % mod for c in self._zq_mul(y, [a - b for a, b in zip(two, t)])]
        return y

    # --- raw integral arithmetic --------------------------------------------
    def _mul(self, u, v):
        out = [0] * self.n
        table = self._table
        for a, ua in enumerate(u):
            if ua:
                row = table[a]
                for b, vb in enumerate(v):
                    if vb:
                        c = ua * vb
                        for i, t in row[b]:
                            out[i] += c * t
        return out

    def _mods(self, A: int):
        mods = self._mods_cache.get(A)
        if mods is None:
            e, f, p = self.e, self.f, self.p
            mods = tuple(p ** max(0, -(-(A - j) // e)) for j in range(e) for _ in range(f))
            self._mods_cache[A] = mods
        return mods

    def _reduce(self, z, A: int):
        return tuple(c % m for c, m in zip(z, self._mods(A)))

    def _int_valuation(self, z, A: int) -> int:
        """Valuation of a reduced integral vector; A if it vanishes mod pi^A."""
        e, f, p = self.e, self.f, self.p
        best = A
        for idx, c in enumerate(z):
            if c:
                j = idx // f
                v = e * _vp(c, p) + j
                if v < best:
                    best = v
        return best

    def _div_pi(self, z):
        t = self._mul(z, self._neg_s_over_w0)
        p = self.p
        if any(c % p for c in t):
            raise ArithmeticError("element is not divisible by pi")
        return [c // p for c in t]

    def _normalize(self, z, A: int, shift: int) -> PadicElement:
        z = self._reduce(z, A)
        w = self._int_valuation(z, A)
        if w >= A:
            return PadicElement(self, shift + A, None, 0)
        for _ in range(w):
            z = self._div_pi(z)
        prec = min(A - w, self.N)
        return PadicElement(self, shift + w, self._reduce(z, prec), prec)

    # --- public constructors ------------------------------------------------
    def __call__(self, x) -> PadicElement:
        if isinstance(x, PadicElement):
            if x.field is not self:
                raise ValueError("element of another field")
            return x
        if isinstance(x, Fraction):
            return self.from_int(x.numerator) / self.from_int(x.denominator)
        return self.from_int(int(x))

    def from_int(self, n: int) -> PadicElement:
        if n == 0:
            return PadicElement(self, ZERO_EXACT, None, 0)
        k = _vp(n, self.p)
        m = n // self.p**k
        unit = [0] * self.n
        unit[0] = m
        u = PadicElement(self, 0, self._reduce(unit, self.N), self.N)
        if k:
            u = u * PadicElement(self, self.e, self._p_unit, self.N) ** k
        return u

    def from_coords(self, coords, abs_prec: int | None = None, shift: int = 0) -> PadicElement:
        """pi^shift times the integral element with the given coordinates mod pi^abs_prec."""
        A = self.N if abs_prec is None else abs_prec
        return self._normalize(list(coords), A, shift)

    def zero(self, abs_prec: int = ZERO_EXACT) -> PadicElement:
        return PadicElement(self, abs_prec, None, 0)

    def one(self) -> PadicElement:
        return PadicElement(self, 0, self._reduce(self._one, self.N), self.N)

    def pi(self) -> PadicElement:
        return PadicElement(self, 1, self._reduce(self._one, self.N), self.N)

    @property
    def uniformizer(self) -> PadicElement:
        return self.pi()

    def naive_lift(self, x) -> PadicElement:
        """Lift of a residue with digit coordinates (not multiplicative)."""
        code = self._residue_code(x)
        v = [0] * self.n
        v[:self.f] = self.residue_field.ff.digits(code)
        if code == 0:
            return self.zero()
        return PadicElement(self, 0, self._reduce(v, self.N), self.N)

    def teichmuller(self, x) -> PadicElement:
        """The Teichmüller representative of a residue (lift(x)^q = lift(x))."""
        code = self._residue_code(x)
        if code == 0:
            return self.zero()
        hit = self._teich_cache.get(code)
        if hit is None:
            q = self.residue_field.q
            y = self.naive_lift(code)
            for _ in range(self.N + 2):
                y2 = y**q
                if y2.unit == y.unit:
                    break
                y = y2
            else:
                raise PrecisionError("Teichmüller iteration did not stabilise")
            hit = y.unit
            self._teich_cache[code] = hit
        return PadicElement(self, 0, hit, self.N)

    lift = teichmuller

    def _residue_code(self, x) -> int:
        if isinstance(x, ResidueElement):
            if x.field != self.residue_field:
                raise ValueError("residue of another field")
            return x.constant_value
        return int(x) % self.residue_field.q

    def residue_element(self, code: int) -> ResidueElement:
        return self.residue_field.const(code)

    # --- invariants ---------------------------------------------------------
    @property
    def degree(self) -> int:
        return self.e * self.f

    def p_unit(self) -> PadicElement:
        """p / pi^e."""
        return PadicElement(self, 0, self._p_unit, self.N)

    def eprime_constant_a(self) -> ResidueElement:
        """Residue class of p * pi^{-e}."""
        return self.p_unit().residue()

    def integral_elements(self, T: int):
        """All integral elements modulo pi^T (as PadicElements with precision T)."""
        import itertools
        ranges = [range(m) for m in self._mods(T)]
        for coords in itertools.product(*ranges):
            yield self.from_coords(coords, T)

    def principal_units_mod(self, T: int):
        """Coordinates of all elements of U_1 / U_T (keys reduced mod pi^T)."""
        import itertools
        mods = self._mods(T)
        p, f = self.p, self.f
        ranges = []
        for idx, m in enumerate(mods):
            if idx < f:
                step = p
                start = 1 if idx == 0 else 0
                ranges.append(range(start, m, step) if m > 1 else range(0, 1))
            else:
                ranges.append(range(m))
        for coords in itertools.product(*ranges):
            yield coords

    def random_unit(self, rng: random.Random) -> PadicElement:
        while True:
            coords = [rng.randrange(m) for m in self._mods(self.N)]
            if any(c % self.p for c in coords[:self.f]):
                return self.from_coords(coords)

    def random_principal_unit(self, rng: random.Random, level: int = 1) -> PadicElement:
        """Uniform element of U_level (at working precision)."""
        coords = [rng.randrange(m) for m in self._mods(self.N)]
        z = self.from_coords(coords)
        return self.one() + self.pi() ** level * z if not z.is_zero() else self.one()

    def random_element(self, rng: random.Random, vmin: int = -2, vmax: int = 3) -> PadicElement:
        return self.pi() ** rng.randint(vmin, vmax) * self.random_unit(rng)

    # --- descriptors --------------------------------------------------------
    def descriptor(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "f": self.f,
            "unramified_poly": list(self.unramified_poly),
            "eisenstein_poly": [c[0] if self.f == 1 or not any(c[1:]) else list(c) for c in self.eisenstein],
            "precision": self.N,
        }

    def __repr__(self):
        return f"LocalField({self.name}, e={self.e}, f={self.f}, N={self.N})"


class PadicElement:
    """pi^val * unit with the unit known modulo pi^prec, or a zero marker."""

    __slots__ = ("field", "val", "unit", "prec")

    def __init__(self, field: LocalField, val: int, unit, prec: int):
        self.field, self.val, self.unit, self.prec = field, val, unit, prec

    # predicates
    def is_zero(self) -> bool:
        return self.unit is None

    def valuation(self) -> int:
        if self.unit is None:
            raise PrecisionError(f"element is zero modulo pi^{self.val}; valuation undetermined")
        return self.val

    @property
    def absolute_precision(self) -> int:
        return self.val if self.unit is None else self.val + self.prec

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, PadicElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        K = self.field
        if self.unit is None and other.unit is None:
            return PadicElement(K, min(self.val, other.val), None, 0)
        if self.unit is None:
            self, other = other, self
        if other.unit is None:
            A = min(self.prec, other.val - self.val)
            if A <= 0:
                return PadicElement(K, other.val, None, 0)
            return PadicElement(K, self.val, K._reduce(self.unit, A), A) if A < self.prec else self
        s = min(self.val, other.val)
        A = min(self.prec + self.val - s, other.prec + other.val - s)
        z = [0] * K.n
        for x in (self, other):
            k = x.val - s
            if k >= A:
                continue
            term = x.unit if k == 0 else K._mul(x.unit, K._pi_shift[k])
            for i, c in enumerate(term):
                z[i] += c
        return K._normalize(z, A, s)

    __radd__ = __add__

    def __neg__(self):
        if self.unit is None:
            return self
        K = self.field
        return PadicElement(K, self.val, K._reduce([-c for c in self.unit], self.prec), self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        K = self.field
        if self.unit is None or other.unit is None:
            if self.unit is None and other.unit is None:
                return PadicElement(K, self.val + other.val, None, 0)
            z, x = (self, other) if self.unit is None else (other, self)
            return PadicElement(K, z.val + x.val, None, 0)
        prec = min(self.prec, other.prec)
        return PadicElement(K, self.val + other.val, K._reduce(K._mul(self.unit, other.unit), prec), prec)

    __rmul__ = __mul__

    def inverse(self) -> PadicElement:
        if self.unit is None:
            raise ZeroDivisionError("inverse of an element indistinguishable from zero")
        K = self.field
        prec = self.prec
        ff = K.residue_field.ff
        r = ff.inv(ff.from_digits([c % K.p for c in self.unit[:K.f]]))
        y = [0] * K.n
        y[:K.f] = ff.digits(r)
        y = K._reduce(y, prec)
        for _ in range(prec.bit_length() + 2):
            uy = K._mul(self.unit, y)
            two_minus = [-c for c in uy]
            two_minus[0] += 2
            y = K._reduce(K._mul(y, two_minus), prec)
        return PadicElement(K, -self.val, y, prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    __hash__ = None

    # structure
    def residue(self) -> ResidueElement:
        K = self.field
        if self.unit is None:
            if self.val >= 1:
                return K.residue_field.zero()
            raise PrecisionError("residue of an element known only modulo pi^0")
        if self.val < 0:
            raise ValueError("residue of a non-integral element")
        if self.val > 0:
            return K.residue_field.zero()
        ff = K.residue_field.ff
        return K.residue_field.const(ff.from_digits([c % K.p for c in self.unit[:K.f]]))

    def unit_part(self) -> PadicElement:
        """self / pi^val."""
        return PadicElement(self.field, 0, self.unit, self.prec)

    def digits(self) -> list[int]:
        """Teichmüller digits d_i with unit = sum lambda(d_i) pi^i, i < prec."""
        K = self.field
        if self.unit is None:
            return []
        out = []
        x = self.unit_part()
        for i in range(self.prec):
            if x.is_zero():
                out.extend([0] * (self.prec - i))
                break
            if x.val > 0:
                out.append(0)
            else:
                d = x.residue().constant_value
                out.append(d)
                x = x - K.teichmuller(d)
            x = x / K.pi() if not x.is_zero() else x
        return out

    def serialize(self) -> str:
        if self.unit is None:
            return "0" if self.val >= ZERO_EXACT else f"O(pi^{self.val})"
        return f"pi^{self.val}*[{','.join(map(str, self.digits()))}]+O(pi^{self.val + self.prec})"

    def __repr__(self):
        return f"<{self.field.name}: {self.serialize()}>"


# --- unit-group operations --------------------------------------------------

def _require_unit(u: PadicElement):
    if u.is_zero() or u.val != 0:
        raise ValueError("expected a unit")


def valuation(x: PadicElement) -> int:
    return x.valuation()


def residue(x: PadicElement) -> ResidueElement:
    return x.residue()


def lift(K: LocalField, xbar) -> PadicElement:
    return K.teichmuller(xbar)


def unit_filtration_level(u: PadicElement) -> int:
    """Largest m <= N with u in 1 + M^m (0 when the residue is not 1)."""
    _require_unit(u)
    K = u.field
    if u.residue() != K.residue_field.one():
        return 0
    z = u - K.one()
    if z.is_zero():
        return min(z.val, K.N)
    return min(z.val, K.N)


def leading_residue(u: PadicElement, level: int) -> ResidueElement:
    """Residue of (u - 1) / pi^level."""
    K = u.field
    z = (u - K.one()) / K.pi() ** level
    return z.residue()


def principal_unit_decomposition(u: PadicElement) -> list[tuple[int, ResidueElement]]:
    """Greedy (m, x_m) with u = lift(res u) * prod (1 + pi^m lift(x_m)) * (1 + O(pi^prec))."""
    _require_unit(u)
    K = u.field
    rest = u / K.teichmuller(u.residue())
    out = []
    pi = K.pi()
    while True:
        m = unit_filtration_level(rest)
        if m >= rest.prec or m >= K.N:
            break
        x = leading_residue(rest, m)
        out.append((m, x))
        rest = rest / (K.one() + pi**m * K.teichmuller(x))
    return out


def recompose(K: LocalField, head: ResidueElement, factors) -> PadicElement:
    out = K.teichmuller(head)
    pi = K.pi()
    for m, x in factors:
        out = out * (K.one() + pi**m * K.teichmuller(x))
    return out


def zeta_p(K: LocalField) -> PadicElement | None:
    """A primitive p-th root of unity in K, or None."""
    p = K.p
    if p == 2:
        return K(-1)
    if K.e % (p - 1):
        return None
    s = K.e // (p - 1)
    a = K.eprime_constant_a()
    ff = K.residue_field.ff
    target = ff.neg(a.constant_value)
    roots = [w for w in range(1, ff.q) if ff.pow(w, p - 1) == target]
    if not roots:
        return None
    pi = K.pi()
    # g(w) = Phi_p(1 + pi^s w) / pi^e = sum_k binom(p, k) pi^{s(k-1) - e} w^{k-1}
    coeffs = [K(math.comb(p, k)) * pi ** (s * (k - 1) - K.e) for k in range(1, p + 1)]
    w = K.teichmuller(min(roots))
    for _ in range(K.N.bit_length() + 4):
        g = sum((c * w ** (k) for k, c in enumerate(coeffs)), K.zero())
        if g.is_zero() and g.val >= K.N:
            break
        dg = sum((c * k * w ** (k - 1) for k, c in enumerate(coeffs) if k), K.zero())
        w = w - g / dg
    zeta = K.one() + pi**s * w
    check = zeta**p - K.one()
    if not check.is_zero() or (zeta - K.one()).is_zero():
        raise PrecisionError("zeta_p failed to converge at working precision")
    return zeta


def step4_multiplier(K: LocalField) -> ResidueElement:
    """Residue of (1 - zeta_p)^p / pi^{e'}."""
    z = zeta_p(K)
    if z is None:
        raise ValueError(f"{K.name} does not contain zeta_{K.p}")
    if not K.eprime_integral:
        raise ValueError("e' is not an integer")
    return ((K.one() - z) ** K.p / K.pi() ** int(K.eprime)).residue()


def solve_artin_schreier(K: LocalField, x: ResidueElement) -> ResidueElement | None:
    """d with d^p + a d = x in the residue field (a = residue of p / pi^e)."""
    ff = K.residue_field.ff
    a = K.eprime_constant_a().constant_value
    target = x.constant_value
    for d in range(ff.q):
        if ff.add(ff.frobenius(d), ff.mul(a, d)) == target:
            return K.residue_element(d)
    return None


def pth_power_test(u: PadicElement, m: int | None = None) -> PadicElement | None:
    """y with y^p = u at working precision, or None when u is not a p-th power.

    Peels the leading term of u / y^p level by level: above e' by Hensel
    steps (1 + pi^{n-e} c)^p, at p | n < e' with (1 + pi^{n/p} d)^p, and at
    n = e' through the Artin-Schreier equation d^p + a d = x.
    """
    _require_unit(u)
    K = u.field
    p, e = K.p, K.e
    if m is not None and unit_filtration_level(u) != m:
        raise ValueError(f"unit is not at filtration level {m}")
    if K.N <= math.floor(K.eprime) + 1:
        raise PrecisionError("precision must exceed e' + 1 for the p-th power test")
    ff = K.residue_field.ff
    head = u.residue().constant_value
    y = K.teichmuller(ff.root(head))
    rest = u / K.teichmuller(head)
    pi = K.pi()
    a = K.eprime_constant_a().constant_value
    ep = K.eprime
    while True:
        n = unit_filtration_level(rest)
        if n >= rest.prec or n >= K.N:
            break
        x = leading_residue(rest, n).constant_value
        if n > ep:
            c = ff.mul(x, ff.inv(a))
            F = K.one() + pi ** (n - e) * K.teichmuller(c)
        elif n < ep and n % p == 0:
            F = K.one() + pi ** (n // p) * K.teichmuller(ff.root(x))
        elif n == ep:
            dd = solve_artin_schreier(K, K.residue_element(x))
            if dd is None:
                return None
            F = K.one() + pi ** (e // (p - 1)) * K.teichmuller(dd)
        else:
            return None
        y = y * F
        rest = rest / F**p
        if rest.prec < 1:
            raise PrecisionError("precision exhausted while extracting a p-th root")
    return y


# --- shipped descriptors ----------------------------------------------------

def field_from_descriptor(desc: dict, precision: int | None = None) -> LocalField:
    for key in ("p", "f", "eisenstein_poly"):
        if key not in desc:
            raise ValueError(f"descriptor is missing '{key}'")
    return LocalField(
        int(desc["p"]), int(desc["f"]),
        eisenstein=desc["eisenstein_poly"],
        unramified_poly=desc.get("unramified_poly"),
        precision=precision if precision is not None else desc.get("precision"),
        name=desc.get("name"),
    )


def load_descriptor(path, precision: int | None = None) -> LocalField:
    """Load a JSON field descriptor from a path or a shipped name."""
    path = Path(path)
    if not path.exists():
        return shipped_field(str(path), precision)
    return field_from_descriptor(json.loads(path.read_text()), precision)


def shipped_names() -> list[str]:
    root = resources.files("bklab") / "fields"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


@lru_cache(maxsize=None)
def shipped_field(name: str, precision: int | None = None) -> LocalField:
    root = resources.files("bklab") / "fields"
    target = root / f"{name}.json"
    if not target.is_file():
        raise FileNotFoundError(f"no shipped field descriptor named {name!r}")
    return field_from_descriptor(json.loads(target.read_text()), precision)
