"""Dense linear algebra over F_p on numpy integer arrays."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DimensionError(ValueError):
    """Raised when matrix and vector shapes do not agree."""


def as_mod_p(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p and the pivot columns."""
    m = as_mod_p(a, p).copy()
    if m.ndim != 2:
        raise DimensionError("expected a 2-d array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis of {x : a x = 0} as the rows of the returned array."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    m, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, fcol in enumerate(free):
        basis[i, fcol] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-m[r, fcol]) % p
    return basis


@dataclass(frozen=True)
class AffineSolution:
    particular: np.ndarray
    kernel: np.ndarray  # rows span the kernel


def solve_mod_p(a, b, p: int) -> AffineSolution | None:
    """Solve a x = b over F_p; ``None`` when inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise DimensionError(f"matrix {a.shape} against target of length {b.shape[0]}")
    cols = a.shape[1]
    aug = np.concatenate([a % p, (b % p)[:, None]], axis=1)
    m, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = m[r, cols]
    return AffineSolution(x, nullspace(a, p))


def in_span(vectors, v, p: int) -> bool:
    vectors = np.asarray(vectors, dtype=np.int64)
    if vectors.size == 0:
        return not np.any(np.asarray(v) % p)
    return solve_mod_p(vectors.T, v, p) is not None


def span_dimension(vectors, p: int) -> int:
    vectors = np.asarray(vectors, dtype=np.int64)
    if vectors.size == 0:
        return 0
    return rank(vectors, p)
