"""Kähler differentials of k = F_q(t1, ..., tr) and the graded models G_m^q.

Forms are stored in the logarithmic basis: a q-form is a finite sum
f_I * dlog t_{i1} ^ ... ^ dlog t_{iq} over strictly increasing index
tuples I. In that basis the Cartier operator and its inverse act
coefficientwise, which is what makes every operation here exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import linalg
from .residue import ResidueElement, ResidueField, TruncationWindow, WindowError


class NotClosedError(ValueError):
    """The Cartier operator was applied to a form with d(form) != 0."""


def _merge_sign(a: tuple, b: tuple) -> int:
    """Sign of the permutation sorting a + b; 0 if they share an index."""
    if set(a) & set(b):
        return 0
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions % 2 else 1


class DifferentialForm:
    """An element of Omega^q_k."""

    __slots__ = ("field", "degree", "terms")

    def __init__(self, field: ResidueField, degree: int, terms: dict | None = None):
        self.field, self.degree = field, degree
        clean = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if c.is_zero():
                continue
            if len(idx) != degree or list(idx) != sorted(set(idx)) or any(i >= field.r for i in idx):
                raise ValueError(f"bad index tuple {idx} for a {degree}-form over {field}")
            clean[idx] = c
        if clean and not 0 <= degree <= field.r:
            raise ValueError(f"Omega^{degree} of {field} is zero")
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, field: ResidueField, degree: int) -> DifferentialForm:
        return cls(field, degree)

    @classmethod
    def function(cls, x: ResidueElement) -> DifferentialForm:
        return cls(x.field, 0, {(): x})

    @classmethod
    def dlog_basis(cls, field: ResidueField, idx, coef: ResidueElement | None = None) -> DifferentialForm:
        idx = tuple(idx)
        return cls(field, len(idx), {idx: coef if coef is not None else field.one()})

    @classmethod
    def dt(cls, field: ResidueField, i: int) -> DifferentialForm:
        return cls(field, 1, {(i,): field.gen(i)})

    # arithmetic
    def _same(self, other):
        if other.field != self.field or other.degree != self.degree:
            raise ValueError("forms of different fields or degrees")

    def __add__(self, other):
        self._same(other)
        terms = dict(self.terms)
        for idx, c in other.terms.items():
            terms[idx] = terms[idx] + c if idx in terms else c
        return DifferentialForm(self.field, self.degree, terms)

    def __neg__(self):
        return DifferentialForm(self.field, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, x) -> DifferentialForm:
        if isinstance(x, int):
            x = self.field.const(x)
        return DifferentialForm(self.field, self.degree, {i: x * c for i, c in self.terms.items()})

    def __rmul__(self, x):
        return self.scale(x)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (self.field, self.degree, self.terms) == (other.field, other.degree, other.terms)

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def wedge(self, other: DifferentialForm) -> DifferentialForm:
        k = self.field
        deg = self.degree + other.degree
        if deg > k.r or deg < 0:
            return DifferentialForm(k, deg)
        terms: dict = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                s = _merge_sign(i, j)
                if s == 0:
                    continue
                idx = tuple(sorted(i + j))
                c = a * b if s > 0 else -(a * b)
                terms[idx] = terms[idx] + c if idx in terms else c
        return DifferentialForm(k, deg, terms)

    __xor__ = wedge

    def d(self) -> DifferentialForm:
        """Exterior derivative: d(f dlog t_I) = sum_j t_j df/dt_j dlog t_j ^ dlog t_I."""
        k = self.field
        out = DifferentialForm(k, self.degree + 1)
        if self.degree + 1 > k.r:
            return out
        for idx, f in self.terms.items():
            for j in range(k.r):
                if j in idx:
                    continue
                c = k.gen(j) * f.derivative(j)
                if not c.is_zero():
                    out = out + DifferentialForm.dlog_basis(k, (j,), c).wedge(
                        DifferentialForm.dlog_basis(k, idx))
        return out

    def is_closed(self) -> bool:
        return self.d().is_zero()

    def _cartier_part(self) -> DifferentialForm:
        zero = (0,) * self.field.r
        terms = {}
        for idx, f in self.terms.items():
            g = f.p_components().get(zero)
            if g is not None:
                terms[idx] = g
        return DifferentialForm(self.field, self.degree, terms)

    def cartier(self) -> DifferentialForm:
        """C on closed forms: x^p dlog y_I -> x dlog y_I, exact forms -> 0."""
        if not self.is_closed():
            raise NotClosedError(f"Cartier operator needs a closed form, got {self}")
        return self._cartier_part()

    def cartier_inverse(self) -> DifferentialForm:
        """A representative of the class of C^{-1}(self) in Omega^q / d Omega^{q-1}."""
        return DifferentialForm(self.field, self.degree,
                                {i: f.frobenius() for i, f in self.terms.items()})

    def is_exact(self) -> bool:
        """Membership in d Omega^{q-1}: closed with vanishing Cartier image."""
        if self.degree == 0:
            return self.is_zero()
        return self.is_closed() and self._cartier_part().is_zero()

    def serialize(self) -> str:
        if not self.terms:
            return "0"
        k = self.field
        parts = []
        for idx in sorted(self.terms):
            c = self.terms[idx].serialize()
            if not idx:
                parts.append(c)
                continue
            basis = " ^ ".join(f"d{k.names[i]}/{k.names[i]}" for i in idx)
            parts.append(basis if c == "1" else f"({c}) * {basis}")
        return " + ".join(parts)

    __str__ = serialize

    def __repr__(self):
        return f"<{self.degree}-form {self.serialize()}>"


def d(x) -> DifferentialForm:
    if isinstance(x, ResidueElement):
        x = DifferentialForm.function(x)
    return x.d()


def dlog(x: ResidueElement) -> DifferentialForm:
    """dx / x."""
    if x.is_zero():
        raise ZeroDivisionError("dlog of zero")
    k = x.field
    terms = {}
    for j in range(k.r):
        c = k.gen(j) * x.derivative(j) / x
        if not c.is_zero():
            terms[(j,)] = c
    return DifferentialForm(k, 1, terms)


def wedge_all(forms, field: ResidueField) -> DifferentialForm:
    out = DifferentialForm.function(field.one())
    for w in forms:
        out = out.wedge(w)
    return out


# --- windows of forms -------------------------------------------------------

class FormWindow:
    """F_p-span of (window basis element) * dlog t_I for |I| = q."""

    def __init__(self, window: TruncationWindow, degree: int):
        self.window, self.degree = window, degree
        self.field = window.field
        r = self.field.r
        self.indices = list(itertools.combinations(range(r), degree)) if 0 <= degree <= r else []

    def __len__(self):
        return len(self.indices) * len(self.window)

    def basis(self):
        k = self.field
        return [DifferentialForm(k, self.degree, {idx: b})
                for idx in self.indices for b in self.window.basis()]

    def coords(self, w: DifferentialForm) -> np.ndarray:
        if w.degree != self.degree:
            raise ValueError("degree mismatch")
        n = len(self.window)
        v = np.zeros(len(self), dtype=np.int64)
        for idx, c in w.terms.items():
            pos = self.indices.index(idx)
            v[pos * n:(pos + 1) * n] = self.window.coords(c)
        return v

    def element(self, v) -> DifferentialForm:
        n = len(self.window)
        terms = {idx: self.window.element(v[pos * n:(pos + 1) * n])
                 for pos, idx in enumerate(self.indices)}
        return DifferentialForm(self.field, self.degree, terms)

    def enlarged(self, factor: int) -> FormWindow:
        w = self.window
        return FormWindow(TruncationWindow(w.field, hi=w.hi * factor, lo=w.lo * factor), self.degree)


def _matrix(domain: FormWindow, op, codomain: FormWindow) -> np.ndarray:
    cols = [codomain.coords(op(b)) for b in domain.basis()]
    if not cols:
        return np.zeros((len(codomain), 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T


def closed_subspace(fw: FormWindow) -> np.ndarray:
    """Rows: basis (in fw coordinates) of Z_1 intersected with the window."""
    p = fw.field.p
    if fw.degree + 1 > fw.field.r:
        return np.eye(len(fw), dtype=np.int64)
    target = FormWindow(fw.window, fw.degree + 1)
    return linalg.nullspace(_matrix(fw, lambda w: w.d(), target), p)


def nu_q(window: TruncationWindow, q: int) -> list[DifferentialForm]:
    """F_p-basis of nu_q(k) = ker(1 - C^{-1}: Omega^q -> Omega^q / d Omega^{q-1}) in the window.

    Solves (x - C^{-1} x) - d y = 0 with y ranging over an enlarged
    window of (q-1)-forms; a WindowError means the codomain window must grow.
    """
    k = window.field
    p = k.p
    dom = FormWindow(window, q)
    if len(dom) == 0:
        return []
    cod = dom.enlarged(p)
    left = _matrix(dom, lambda w: w - w.cartier_inverse(), cod)
    if q >= 1:
        ydom = FormWindow(cod.window, q - 1)
        right = _matrix(ydom, lambda w: w.d(), cod)
        mat = np.concatenate([left, (-right) % p], axis=1)
    else:
        mat = left
    ker = linalg.nullspace(mat, p)
    xs = ker[:, :len(dom)] % p
    if xs.size == 0:
        return []
    red, piv = linalg.rref(xs, p)
    return [dom.element(red[i]) for i in range(len(piv))]


# --- graded models ----------------------------------------------------------

@dataclass(frozen=True)
class RamificationData:
    """p, absolute ramification index e and the residue a of p / pi^e."""

    p: int
    e: int
    a: ResidueElement | None = None

    @property
    def eprime(self) -> Fraction:
        return Fraction(self.p * self.e, self.p - 1)

    @property
    def eprime_integral(self) -> bool:
        return self.eprime.denominator == 1


ZERO_LEVEL = "zero_level"
PRIME_TO_P = "prime_to_p"
DIVISIBLE_BY_P = "divisible_by_p"
AT_EPRIME = "at_eprime"
ABOVE_EPRIME = "above_eprime"


def regime(m: int, ram: RamificationData) -> str:
    ep = ram.eprime
    if m == 0:
        return ZERO_LEVEL
    if m < ep:
        return DIVISIBLE_BY_P if m % ram.p == 0 else PRIME_TO_P
    if m == ep:
        return AT_EPRIME
    return ABOVE_EPRIME


_SUMMANDS = {
    ZERO_LEVEL: ((0, "nu"), (1, "nu")),
    PRIME_TO_P: ((1, "full"),),
    DIVISIBLE_BY_P: ((1, "Z1"), (2, "Z1")),
    AT_EPRIME: ((1, "aC"), (2, "aC")),
    ABOVE_EPRIME: (),
}


@dataclass(frozen=True)
class GradedModel:
    """G_m^q: a direct sum of subspaces / quotients of Omega^{q-1}, Omega^{q-2}.

    ``summands`` lists (form degree, kind) with kind one of
    nu (the subspace nu_j), full (Omega^j), Z1 (Omega^j / Z_1) and
    aC (Omega^j / (1 + aC) Z_1). For the zero level the degrees are q, q-1.
    """

    q: int
    m: int
    field: ResidueField
    ram: RamificationData
    regime: str
    summands: tuple

    def zero_class(self) -> GradedClass:
        return GradedClass(self, tuple(DifferentialForm(self.field, j) for j, _ in self.summands))

    def make(self, *forms) -> GradedClass:
        if len(forms) != len(self.summands):
            raise ValueError(f"{self.regime} model takes {len(self.summands)} components")
        out = []
        for (j, kind), w in zip(self.summands, forms):
            if isinstance(w, ResidueElement):
                w = DifferentialForm.function(w)
            if w is None:
                w = DifferentialForm(self.field, j)
            if w.degree != j:
                raise ValueError(f"component of degree {w.degree}, expected {j}")
            out.append(w)
        return GradedClass(self, tuple(out))

    def subspace_rows(self, pos: int, fw: FormWindow) -> np.ndarray:
        """Coordinates (rows) spanning the quotiented subspace inside the window."""
        j, kind = self.summands[pos]
        p = self.field.p
        if kind in ("full", "nu"):
            return np.zeros((0, len(fw)), dtype=np.int64)
        z1 = closed_subspace(fw)
        if kind == "Z1":
            return z1
        a = self.ram.a if self.ram.a is not None else self.field.one()
        rows = []
        for v in z1:
            z = fw.element(v)
            rows.append(fw.coords(z + z.cartier().scale(a)))
        return np.array(rows, dtype=np.int64).reshape(-1, len(fw)) % p

    def component_window(self, pos: int, window: TruncationWindow) -> FormWindow:
        return FormWindow(window, self.summands[pos][0])

    def dimension(self, window: TruncationWindow | None = None) -> int:
        """F_p-dimension (exact for finite k, window-relative otherwise)."""
        if window is None:
            if not self.field.is_finite:
                raise ValueError("infinite residue field needs a truncation window")
            window = TruncationWindow(self.field)
        p = self.field.p
        total = 0
        for pos, (j, kind) in enumerate(self.summands):
            fw = FormWindow(window, j)
            if len(fw) == 0:
                continue
            if kind == "nu":
                total += len(nu_q(window, j))
            else:
                total += len(fw) - linalg.span_dimension(self.subspace_rows(pos, fw), p)
        return total


def graded_model(q: int, m: int, field: ResidueField, ram: RamificationData) -> GradedModel:
    if q < 0 or m < 0:
        raise ValueError("q and m must be non-negative")
    reg = regime(m, ram)
    if reg == AT_EPRIME and not ram.eprime_integral:
        raise ValueError("m = e' requested but e' is not an integer")
    summands = tuple((q - off, kind) for off, kind in _SUMMANDS[reg])
    return GradedModel(q, m, field, ram, reg, summands)


@dataclass(frozen=True)
class GradedClass:
    model: GradedModel
    components: tuple

    def __sub__(self, other):
        if other.model != self.model:
            raise ValueError("classes of different graded models")
        return GradedClass(self.model, tuple(a - b for a, b in zip(self.components, other.components)))

    def __add__(self, other):
        if other.model != self.model:
            raise ValueError("classes of different graded models")
        return GradedClass(self.model, tuple(a + b for a, b in zip(self.components, other.components)))

    def is_zero(self, window: TruncationWindow | None = None) -> bool:
        """Zero test modulo the model's subspaces, relative to ``window``."""
        model = self.model
        for pos, ((j, kind), w) in enumerate(zip(model.summands, self.components)):
            if w.is_zero():
                continue
            if kind in ("full", "nu"):
                return False
            if kind == "Z1":
                if not w.is_closed():
                    return False
                continue
            if window is None:
                window = TruncationWindow(model.field)
            fw = FormWindow(window, j)
            rows = model.subspace_rows(pos, fw)
            target = fw.coords(w)
            if not linalg.in_span(rows, target, model.field.p):
                return False
        return True

    def serialize(self) -> str:
        return "(" + ", ".join(w.serialize() for w in self.components) + ")"


def graded_class_eq(c1: GradedClass, c2: GradedClass, window: TruncationWindow | None = None) -> bool:
    return (c1 - c2).is_zero(window)


def aC_preimage(model: GradedModel, pos: int, target: DifferentialForm,
                window: TruncationWindow | None = None) -> DifferentialForm | None:
    """z in Z_1 with z + a C(z) = target, or None."""
    if window is None:
        window = TruncationWindow(model.field)
    fw = FormWindow(window, model.summands[pos][0])
    z1 = closed_subspace(fw)
    rows = model.subspace_rows(pos, fw)
    sol = linalg.solve_mod_p(rows.T, fw.coords(target), model.field.p)
    if sol is None:
        return None
    coeffs = sol.particular
    return fw.element((coeffs @ z1) % model.field.p)


# --- the Step-I pairing -----------------------------------------------------

def phi_m(u: GradedClass, v: GradedClass) -> DifferentialForm:
    """The pairing G_m^q x G_{e'-m}^{r+2-q} -> Omega^r / d Omega^{r-1} (a representative)."""
    mu, mv = u.model, v.model
    k = mu.field
    if mv.field != k or mu.ram != mv.ram:
        raise ValueError("pairing needs a common residue field and ramification data")
    if mu.m + mv.m != mu.ram.eprime or mu.q + mv.q != k.r + 2:
        raise ValueError("incompatible levels or degrees for the pairing")
    if mu.regime == PRIME_TO_P and mv.regime == PRIME_TO_P:
        return u.components[0].wedge(v.components[0])
    if mu.regime == DIVISIBLE_BY_P and mv.regime == DIVISIBLE_BY_P:
        x1, x2 = u.components
        y1, y2 = v.components
        return x1.wedge(y2.d()) + x2.wedge(y1.d())
    raise ValueError(f"no pairing between regimes {mu.regime} and {mv.regime}")


def cartier_readout(w: DifferentialForm) -> int:
    """F_p-valued functional on Omega^r / d Omega^{r-1} for Laurent forms.

    Iterates C until only exponent-zero terms remain, then returns the
    trace of the coefficient of dlog t1 ^ ... ^ dlog tr.
    """
    k = w.field
    if w.degree != k.r:
        raise ValueError("readout is defined on top-degree forms")
    top = tuple(range(k.r))
    zero = (0,) * k.r
    for _ in range(64):
        c = w.terms.get(top)
        if c is None:
            return 0
        terms = c.laurent_terms()
        if terms is None:
            raise WindowError(f"{w} is not a Laurent form")
        if all(e == zero for e in terms):
            return k.ff.trace(terms.get(zero, 0))
        w = w.cartier()
    raise RuntimeError("Cartier iteration did not stabilise")


@dataclass
class PairingReport:
    m: int
    q: int
    left_dim: int
    right_dim: int
    rank: int
    left_quotient_dim: int
    degenerate_vectors: list = field(default_factory=list)
    gram: np.ndarray | None = None

    @property
    def nondegenerate(self) -> bool:
        return not self.degenerate_vectors


def _model_space(model: GradedModel, window: TruncationWindow):
    """Basis classes of the model over the window plus the quotient rows."""
    blocks = [FormWindow(window, j) for j, _ in model.summands]
    sizes = [len(b) for b in blocks]
    basis = []
    for pos, b in enumerate(blocks):
        for w in b.basis():
            comps = [DifferentialForm(model.field, j) for j, _ in model.summands]
            comps[pos] = w
            basis.append(GradedClass(model, tuple(comps)))
    total = sum(sizes)
    sub = []
    offset = 0
    for pos, b in enumerate(blocks):
        if model.summands[pos][1] == "nu":
            raise ValueError("pairing is not defined on the zero level")
        for row in model.subspace_rows(pos, b):
            full = np.zeros(total, dtype=np.int64)
            full[offset:offset + sizes[pos]] = row
            sub.append(full)
        offset += sizes[pos]
    return basis, np.array(sub, dtype=np.int64).reshape(len(sub), total)


def pairing_rank(m: int, q: int, ram: RamificationData, field: ResidueField,
                 left: TruncationWindow, right: TruncationWindow) -> PairingReport:
    """Gram matrix of phi_m over F_p (via cartier_readout) and its left radical."""
    p = field.p
    r = field.r
    lm = graded_model(q, m, field, ram)
    ep = ram.eprime
    if ep.denominator != 1:
        raise ValueError("pairing needs integral e'")
    rm = graded_model(r + 2 - q, int(ep) - m, field, ram)
    lbasis, lsub = _model_space(lm, left)
    rbasis, _ = _model_space(rm, right)
    gram = np.array([[cartier_readout(phi_m(u, v)) for v in rbasis] for u in lbasis],
                    dtype=np.int64).reshape(len(lbasis), len(rbasis))
    rk = linalg.rank(gram, p) if gram.size else 0
    radical = linalg.nullspace(gram.T, p) if len(lbasis) else np.zeros((0, 0), dtype=np.int64)
    sub_rank = linalg.span_dimension(lsub, p) if lsub.size else 0
    # radical vectors that stay nonzero modulo the quotiented subspace
    bad = []
    base = [row for row in lsub]
    for vec in radical:
        cur = linalg.span_dimension(np.array(base, dtype=np.int64), p) if base else 0
        if linalg.span_dimension(np.array(base + [vec], dtype=np.int64), p) > cur:
            bad.append(vec)
            base.append(vec)
    return PairingReport(m=m, q=q, left_dim=len(lbasis), right_dim=len(rbasis), rank=rk,
                         left_quotient_dim=len(lbasis) - sub_rank,
                         degenerate_vectors=bad, gram=gram)


def omega_dimension(field: ResidueField, j: int) -> int:
    """Rank of Omega^j over k."""
    return comb(field.r, j) if 0 <= j <= field.r else 0
