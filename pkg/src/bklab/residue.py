"""Characteristic-p coefficient fields: F_{p^f} and F_{p^f}(t1, ..., tr), r <= 2.

Elements of F_q are encoded as integers whose base-p digits are the
coordinates in the power basis 1, g, ..., g^(f-1) of a fixed defining
polynomial. Rational functions are kept as reduced fractions with a
denominator that is monic for the graded lexicographic order (t1 < t2).
"""

from __future__ import annotations

import itertools
import numpy as np

from . import linalg

# Conway polynomials, coefficients constant term first.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
}

VARIABLE_NAMES = ("t1", "t2")


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def _poly_mod_p(a, b, p):
    """Remainder of a by monic-able b over F_p (lists, constant first)."""
    a = list(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = (a[-1] * inv) % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def is_irreducible_mod_p(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = [c % p for c in poly]
    deg = len(poly) - 1
    if deg < 1 or poly[-1] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod_p(poly, list(low) + [1], p):
                return False
    return True


class FiniteField:
    """F_{p^f} with precomputed operation tables."""

    def __init__(self, p: int, f: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if f < 1:
            raise ValueError("inertia degree must be >= 1")
        if modulus is None:
            if (p, f) not in CONWAY:
                raise ValueError(f"no shipped defining polynomial for F_{p}^{f}")
            modulus = CONWAY[(p, f)]
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError("defining polynomial must be monic of degree f")
        if not is_irreducible_mod_p(modulus, p):
            raise ValueError(f"{modulus} is reducible over F_{p}")
        self.p, self.f, self.modulus = p, f, modulus
        self.q = p**f
        self._build_tables()

    def _build_tables(self):
        p, f, q = self.p, self.f, self.q
        digits = [self._to_digits(a) for a in range(q)]
        self._add = [[self._from_digits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                      for b in range(q)] for a in range(q)]
        self._neg = [self._from_digits([(-x) % p for x in digits[a]]) for a in range(q)]
        self._mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                prod = [0] * (2 * f - 1)
                for i, x in enumerate(digits[a]):
                    if x:
                        for j, y in enumerate(digits[b]):
                            prod[i + j] += x * y
                red = _poly_mod_p([c % p for c in prod], self.modulus, p) if f > 1 else [prod[0] % p]
                val = self._from_digits(red + [0] * (f - len(red)))
                self._mul[a][b] = self._mul[b][a] = val
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break
        self._frob = [self.pow(a, p) for a in range(q)]
        self._root = [0] * q
        for a in range(q):
            self._root[self._frob[a]] = a

    def _to_digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _from_digits(self, ds) -> int:
        val = 0
        for d in reversed(list(ds)):
            val = val * self.p + d
        return val

    def digits(self, a: int) -> list[int]:
        """Coordinates of ``a`` in the power basis, constant term first."""
        return self._to_digits(a)

    def from_digits(self, ds) -> int:
        return self._from_digits([d % self.p for d in ds])

    def from_int(self, n: int) -> int:
        return n % self.p

    @property
    def generator(self) -> int:
        """The class of g (the root of the defining polynomial)."""
        return self.p if self.f > 1 else (-self.modulus[0]) % self.p

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self._inv[a]

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = 1
        while n:
            if n & 1:
                result = self._mul[result][a]
            a = self._mul[a][a]
            n >>= 1
        return result

    def frobenius(self, a):
        return self._frob[a]

    def root(self, a):
        """The unique p-th root (F_q is perfect)."""
        return self._root[a]

    def trace(self, a) -> int:
        """Absolute trace to F_p."""
        s, x = 0, a
        for _ in range(self.f):
            s = self.add(s, x)
            x = self._frob[x]
        return s  # lies in F_p, i.e. is a digit < p

    def elements(self):
        return range(self.q)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.f, self.modulus) == (
            other.p, other.f, other.modulus)

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def __repr__(self):
        return f"FiniteField({self.p}, {self.f})"


# --- dense polynomial rings -------------------------------------------------

class _FieldCoeffs:
    """Adapter presenting F_q with the coefficient-ring interface."""

    def __init__(self, ff: FiniteField):
        self.ff = ff
        self.zero, self.one = 0, 1

    def add(self, a, b):
        return self.ff.add(a, b)

    def sub(self, a, b):
        return self.ff.sub(a, b)

    def neg(self, a):
        return self.ff.neg(a)

    def mul(self, a, b):
        return self.ff.mul(a, b)

    def is_zero(self, a):
        return a == 0

    def exact_div(self, a, b):
        return self.ff.mul(a, self.ff.inv(b))

    def gcd(self, a, b):
        return 0 if a == 0 and b == 0 else 1

    is_field = True


class _DensePolys:
    """Polynomials as trimmed tuples of coefficients (constant term first)."""

    is_field = False

    def __init__(self, base):
        self.base = base
        self.zero = ()
        self.one = (base.one,)

    def trim(self, a):
        a = list(a)
        while a and self.base.is_zero(a[-1]):
            a.pop()
        return tuple(a)

    def is_zero(self, a):
        return not a

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = self.base.add(out[i], c)
        return self.trim(out)

    def neg(self, a):
        return tuple(self.base.neg(c) for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, c, a):
        if self.base.is_zero(c):
            return ()
        return self.trim(self.base.mul(c, x) for x in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [self.base.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if self.base.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not self.base.is_zero(y):
                    out[i + j] = self.base.add(out[i + j], self.base.mul(x, y))
        return self.trim(out)

    def shift(self, a, n):
        return (self.base.zero,) * n + a if a else ()

    def divmod(self, a, b):
        """Division with remainder; requires the leading coefficient of b to divide."""
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        quo = [self.base.zero] * max(len(a) - len(b) + 1, 1)
        rem = a
        lb = b[-1]
        while rem and len(rem) >= len(b):
            c = self.base.exact_div(rem[-1], lb)
            k = len(rem) - len(b)
            quo[k] = c
            rem = self.sub(rem, self.shift(self.scale(c, b), k))
        return self.trim(quo), rem

    def exact_div(self, a, b):
        quo, rem = self.divmod(a, b)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        return quo

    def content(self, a):
        g = self.base.zero
        for c in a:
            g = self.base.gcd(g, c)
        return g

    def primitive(self, a):
        if not a:
            return a
        c = self.content(a)
        return tuple(self.base.exact_div(x, c) for x in a)

    def prem(self, a, b):
        lb = b[-1]
        while a and len(a) >= len(b):
            k = len(a) - len(b)
            a = self.sub(self.scale(lb, a), self.shift(self.scale(a[-1], b), k))
        return a

    def gcd(self, a, b):
        if not a:
            return self.normal(b)
        if not b:
            return self.normal(a)
        if self.base.is_field:
            while b:
                a, b = b, self.divmod(a, b)[1]
            return self.normal(a)
        cont = self.base.gcd(self.content(a), self.content(b))
        a, b = self.primitive(a), self.primitive(b)
        while b:
            r = self.prem(a, b)
            a, b = b, self.primitive(r) if r else ()
        return self.normal(self.scale(cont, a))

    def normal(self, a):
        """Unit normalisation: make the innermost leading coefficient 1."""
        if not a:
            return a
        lc = a[-1]
        base = self.base
        while not base.is_field:
            lc = lc[-1]
            base = base.base
        return self._scale_deep(base.ff.inv(lc), a)

    def _scale_deep(self, c, a):
        if self.base.is_field:
            return self.scale(c, a)
        return tuple(self.base._scale_deep(c, x) for x in a)


# --- the coefficient field k ------------------------------------------------

def _grlex_key(exp):
    return (sum(exp), tuple(reversed(exp)))


class ResidueField:
    """Descriptor for k = F_{p^f}(t1, ..., tr) with r in {0, 1, 2}."""

    def __init__(self, p: int, f: int = 1, r: int = 0, modulus=None):
        if r not in (0, 1, 2):
            raise ValueError("only r in {0, 1, 2} indeterminates are supported")
        self.ff = FiniteField(p, f, modulus)
        self.p, self.f, self.r = p, f, r
        self.q = self.ff.q
        self.names = VARIABLE_NAMES[:r]
        ring = _FieldCoeffs(self.ff)
        for _ in range(r):
            ring = _DensePolys(ring)
        self.ring = ring

    def __eq__(self, other):
        return isinstance(other, ResidueField) and (self.ff, self.r) == (other.ff, other.r)

    def __hash__(self):
        return hash((self.ff, self.r))

    def __repr__(self):
        base = f"F_{self.q}"
        return base if self.r == 0 else f"{base}({', '.join(self.names)})"

    @property
    def is_finite(self) -> bool:
        return self.r == 0

    # polynomial <-> monomial dictionaries
    def to_dict(self, poly) -> dict:
        if self.r == 0:
            return {(): poly} if poly else {}
        if self.r == 1:
            return {(i,): c for i, c in enumerate(poly) if c}
        return {(i, j): c for j, row in enumerate(poly) for i, c in enumerate(row) if c}

    def from_dict(self, d: dict):
        d = {e: c for e, c in d.items() if c}
        if self.r == 0:
            return d.get((), 0)
        if self.r == 1:
            n = max((e[0] for e in d), default=-1) + 1
            return self.ring.trim(d.get((i,), 0) for i in range(n))
        n2 = max((e[1] for e in d), default=-1) + 1
        rows = []
        for j in range(n2):
            n1 = max((e[0] for e in d if e[1] == j), default=-1) + 1
            rows.append(self.ring.base.trim(d.get((i, j), 0) for i in range(n1)))
        return self.ring.trim(rows)

    def leading_coefficient(self, poly):
        d = self.to_dict(poly)
        return d[max(d, key=_grlex_key)]

    # constructors
    def element(self, num, den=None) -> ResidueElement:
        return ResidueElement._make(self, num, den)

    def zero(self) -> ResidueElement:
        return self.element(self.ring.zero)

    def one(self) -> ResidueElement:
        return self.element(self.ring.one)

    def const(self, c: int) -> ResidueElement:
        """The F_q element encoded by ``c`` (base-p digits)."""
        c %= self.q
        if self.r == 0:
            return self.element(c)
        return self.element(self.from_dict({(0,) * self.r: c}))

    def gen(self, i: int = 0) -> ResidueElement:
        """The indeterminate t_{i+1}."""
        if i >= self.r:
            raise IndexError(f"{self} has {self.r} indeterminates")
        e = [0] * self.r
        e[i] = 1
        return self.element(self.from_dict({tuple(e): 1}))

    def monomial(self, exp, c: int = 1) -> ResidueElement:
        """c * t^exp with integer (possibly negative) exponents."""
        exp = tuple(exp)
        if self.r == 0:
            return self.const(c)
        num = tuple(max(a, 0) for a in exp)
        den = tuple(max(-a, 0) for a in exp)
        return self.element(self.from_dict({num: c}), self.from_dict({den: 1}))

    def from_monomials(self, terms: dict) -> ResidueElement:
        """Sum of c * t^exp for a dict exp -> c (Laurent exponents allowed)."""
        if self.r == 0:
            return self.const(terms.get((), 0))
        shift = [max([-e[i] for e in terms] + [0]) for i in range(self.r)]
        num = {}
        for e, c in terms.items():
            key = tuple(a + s for a, s in zip(e, shift))
            num[key] = self.ff.add(num.get(key, 0), c)
        return self.element(self.from_dict(num), self.from_dict({tuple(shift): 1}))

    def elements_of_constants(self):
        return [self.const(c) for c in range(self.q)]


class ResidueElement:
    """An element of a ResidueField in canonical reduced form."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den):
        self.field, self.num, self.den = field, num, den

    @classmethod
    def _make(cls, field: ResidueField, num, den=None):
        ring = field.ring
        if field.r == 0:
            den = 1 if den is None else den
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            return cls(field, field.ff.mul(num, field.ff.inv(den)), 1)
        if den is None:
            den = ring.one
        if ring.is_zero(den):
            raise ZeroDivisionError("zero denominator")
        if ring.is_zero(num):
            return cls(field, ring.zero, ring.one)
        g = ring.gcd(num, den)
        if g != ring.one:
            num, den = ring.exact_div(num, g), ring.exact_div(den, g)
        c = field.ff.inv(field.leading_coefficient(den))
        if c != 1:
            num, den = ring._scale_deep(c, num), ring._scale_deep(c, den)
        return cls(field, num, den)

    def _check(self, other):
        if isinstance(other, int):
            return self.field.const(other)
        if other.field != self.field:
            raise ValueError("elements of different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        k, ring = self.field, self.field.ring
        if k.r == 0:
            return ResidueElement(k, k.ff.add(self.num, other.num), 1)
        if self.den == other.den:
            return k.element(ring.add(self.num, other.num), self.den)
        num = ring.add(ring.mul(self.num, other.den), ring.mul(other.num, self.den))
        return k.element(num, ring.mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        k = self.field
        if k.r == 0:
            return ResidueElement(k, k.ff.neg(self.num), 1)
        return ResidueElement(k, k.ring.neg(self.num), self.den)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, (ResidueElement, int)):
            return NotImplemented
        other = self._check(other)
        k, ring = self.field, self.field.ring
        if k.r == 0:
            return ResidueElement(k, k.ff.mul(self.num, other.num), 1)
        return k.element(ring.mul(self.num, other.num), ring.mul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> ResidueElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero residue element")
        k = self.field
        if k.r == 0:
            return ResidueElement(k, k.ff.inv(self.num), 1)
        return k.element(self.den, self.num)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return self.field.ring.is_zero(self.num)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.const(other)
        if not isinstance(other, ResidueElement):
            return NotImplemented
        return self.field == other.field and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # structure
    def num_dict(self) -> dict:
        return self.field.to_dict(self.num)

    def den_dict(self) -> dict:
        return self.field.to_dict(self.den)

    def laurent_terms(self) -> dict | None:
        """exp -> coefficient when the denominator is a monomial, else None."""
        k = self.field
        if k.r == 0:
            return {(): self.num} if self.num else {}
        den = self.den_dict()
        if len(den) != 1:
            return None
        (dexp, _), = den.items()
        return {tuple(a - b for a, b in zip(e, dexp)): c for e, c in self.num_dict().items()}

    @property
    def constant_value(self) -> int:
        """F_q code of a constant element."""
        k = self.field
        if k.r == 0:
            return self.num
        terms = self.laurent_terms()
        if terms is None or any(any(e) for e in terms):
            raise ValueError(f"{self} is not a constant")
        return terms.get((0,) * k.r, 0)

    def derivative(self, i: int) -> ResidueElement:
        """Partial derivative with respect to t_{i+1}."""
        k = self.field
        if k.r == 0:
            return k.zero()

        def dpoly(d):
            out = {}
            for e, c in d.items():
                if e[i] % k.p:
                    e2 = list(e)
                    e2[i] -= 1
                    out[tuple(e2)] = k.ff.mul(k.ff.from_int(e[i]), c)
            return k.from_dict(out)

        ring = k.ring
        dn, dd = dpoly(self.num_dict()), dpoly(self.den_dict())
        top = ring.sub(ring.mul(dn, self.den), ring.mul(self.num, dd))
        return k.element(top, ring.mul(self.den, self.den))

    def frobenius(self) -> ResidueElement:
        """x -> x^p."""
        k = self.field
        if k.r == 0:
            return ResidueElement(k, k.ff.frobenius(self.num), 1)

        def fpoly(d):
            return k.from_dict({tuple(k.p * a for a in e): k.ff.frobenius(c) for e, c in d.items()})

        return ResidueElement(k, fpoly(self.num_dict()), fpoly(self.den_dict()))

    def p_components(self) -> dict:
        """Write x = sum_lam t^lam * g_lam^p over lam in [0, p)^r; returns lam -> g_lam."""
        k = self.field
        p = k.p
        if k.r == 0:
            return {(): ResidueElement(k, k.ff.root(self.num), 1)} if self.num else {}
        ring = k.ring
        numer = self.num
        for _ in range(p - 1):
            numer = ring.mul(numer, self.den)
        parts: dict = {}
        for e, c in k.to_dict(numer).items():
            lam = tuple(a % p for a in e)
            parts.setdefault(lam, {})[tuple(a // p for a in e)] = k.ff.root(c)
        return {lam: k.element(k.from_dict(d), self.den) for lam, d in parts.items()}

    def pth_root(self) -> ResidueElement | None:
        """y with y^p = x, or None when x is not a p-th power in k."""
        if self.is_zero():
            return self
        comps = self.p_components()
        zero = (0,) * self.field.r
        if any(lam != zero for lam in comps):
            return None
        return comps[zero]

    def serialize(self) -> str:
        k = self.field
        if k.r == 0:
            return _coef_str(k, self.num)
        num = _poly_str(k, self.num_dict())
        if self.den == k.ring.one:
            return num
        return f"({num})/({_poly_str(k, self.den_dict())})"

    __str__ = serialize

    def __repr__(self):
        return f"<{self.field}: {self.serialize()}>"


def _coef_str(k: ResidueField, c: int) -> str:
    return "".join(str(d) for d in reversed(k.ff.digits(c))).lstrip("0") or "0"


def _poly_str(k: ResidueField, d: dict) -> str:
    if not d:
        return "0"
    terms = []
    for e in sorted(d, key=_grlex_key, reverse=True):
        mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(k.names, e) if a)
        c = _coef_str(k, d[e])
        if not mono:
            terms.append(c)
        elif c == "1":
            terms.append(mono)
        else:
            terms.append(f"[{c}]*{mono}")
    return " + ".join(terms)


# --- truncation windows ------------------------------------------------------

class WindowError(ValueError):
    """An element falls outside the declared truncation window."""


class TruncationWindow:
    """Laurent monomials t^a, lo <= a_i <= hi, times the F_p-basis of F_q.

    For r = 0 the window is all of F_q. The default bounds allow
    numerator degree 6 and denominators t1^a t2^b with a, b <= 2.
    """

    def __init__(self, field: ResidueField, hi: int = 6, lo: int = -2):
        if lo > 0 or hi < 0:
            raise ValueError("window must contain the constants")
        self.field, self.lo, self.hi = field, lo, hi
        exps = list(itertools.product(range(lo, hi + 1), repeat=field.r))
        self.exponents = exps
        self._index = {(e, i): n for n, (e, i) in
                       enumerate(itertools.product(exps, range(field.f)))}

    def __len__(self):
        return len(self._index)

    @property
    def dim(self) -> int:
        return len(self)

    def basis(self):
        k = self.field
        return [k.monomial(e, k.ff.p**i) for (e, i) in self._index]

    def coords(self, x: ResidueElement) -> np.ndarray:
        k = self.field
        v = np.zeros(len(self), dtype=np.int64)
        terms = x.laurent_terms()
        if terms is None:
            raise WindowError(f"{x} is not a Laurent polynomial")
        for e, c in terms.items():
            for i, d in enumerate(k.ff.digits(c)):
                if d:
                    try:
                        v[self._index[(e, i)]] = d
                    except KeyError:
                        raise WindowError(f"exponent {e} of {x} outside [{self.lo}, {self.hi}]") from None
        return v

    def contains(self, x: ResidueElement) -> bool:
        try:
            self.coords(x)
        except WindowError:
            return False
        return True

    def element(self, v) -> ResidueElement:
        k = self.field
        terms: dict = {}
        for (e, i), n in self._index.items():
            d = int(v[n]) % k.p
            if d:
                terms[e] = k.ff.add(terms.get(e, 0), k.ff.mul(d, k.ff.p**i if i else 1))
        return k.from_monomials(terms)

    def __repr__(self):
        return f"TruncationWindow({self.field}, [{self.lo}, {self.hi}])"


def solve_fp_linear(domain, op, target, codomain):
    """Affine solution set of op(x) = target for x in the span of ``domain``.

    ``domain`` and ``codomain`` expose ``basis()``, ``coords`` and ``len``;
    ``op`` is an F_p-linear map given on elements. Returns a
    linalg.AffineSolution in domain coordinates or None.
    """
    p = domain.field.p if hasattr(domain, "field") else domain.p
    cols = [codomain.coords(op(b)) for b in domain.basis()]
    mat = np.array(cols, dtype=np.int64).T if cols else np.zeros((len(codomain), 0), dtype=np.int64)
    tgt = codomain.coords(target) if not isinstance(target, np.ndarray) else target
    if len(tgt) != mat.shape[0]:
        raise linalg.DimensionError("target does not live in the codomain window")
    return linalg.solve_mod_p(mat, tgt, p)


def operator_matrix(domain, op, codomain) -> np.ndarray:
    cols = [codomain.coords(op(b)) for b in domain.basis()]
    if not cols:
        return np.zeros((len(codomain), 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T
