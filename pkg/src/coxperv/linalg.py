"""Exact linear algebra on numpy object arrays.

Matrices hold Fractions or QSqrt5 entries; numpy supplies storage and ``@``,
everything that needs a pivot decision (echelon forms, rank, solving) is done
here with exact comparisons against zero.
"""
from __future__ import annotations

import numpy as np

from .scalars import RATIONAL, Field


def matrix(rows, field: Field = RATIONAL, shape=None) -> np.ndarray:
    """Build an object array with entries coerced into ``field``."""
    if isinstance(rows, np.ndarray) and rows.dtype == object and rows.ndim == 2:
        out = np.empty(rows.shape, dtype=object)
        for idx, x in np.ndenumerate(rows):
            out[idx] = field.coerce(x)
        return out
    rows = [list(r) for r in rows]
    if shape is None:
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
    else:
        nrows, ncols = shape
    out = np.empty((nrows, ncols), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != ncols:
            raise ValueError("ragged matrix rows")
        for j, x in enumerate(r):
            out[i, j] = field.coerce(x)
    return out


def zeros(nrows: int, ncols: int, field: Field = RATIONAL) -> np.ndarray:
    out = np.empty((nrows, ncols), dtype=object)
    out.fill(field.zero)
    return out


def identity(n: int, field: Field = RATIONAL) -> np.ndarray:
    out = zeros(n, n, field)
    for i in range(n):
        out[i, i] = field.one
    return out


def mul(*mats: np.ndarray) -> np.ndarray:
    """Product of a chain of matrices; handles zero-sized factors."""
    out = mats[0]
    for m in mats[1:]:
        if out.shape[1] != m.shape[0]:
            raise ValueError(f"shape mismatch {out.shape} @ {m.shape}")
        out = out @ m
    return out


def is_zero(m: np.ndarray) -> bool:
    return all(x == 0 for x in m.flat)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def is_identity(m: np.ndarray) -> bool:
    n, k = m.shape
    if n != k:
        return False
    for (i, j), x in np.ndenumerate(m):
        if x != (1 if i == j else 0):
            return False
    return True


def rref(m: np.ndarray):
    """Reduced row echelon form and pivot column indices."""
    a = m.copy()
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i, c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        inv = 1 / a[r, c]
        a[r] = a[r] * inv
        for i in range(nrows):
            if i != r and a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    if 0 in m.shape:
        return 0
    return len(rref(m)[1])


def column_basis(m: np.ndarray) -> np.ndarray:
    """Columns of ``m`` at the echelon pivots: a deterministic image basis."""
    if 0 in m.shape:
        return m[:, :0]
    _, piv = rref(m)
    return m[:, piv]


def solve(b: np.ndarray, y: np.ndarray) -> np.ndarray:
    """The unique X with ``b @ X == y`` for ``b`` of full column rank.

    Raises ValueError if ``y`` is not in the column space of ``b``.
    """
    n, k = b.shape
    ny = y.shape[1]
    if y.shape[0] != n:
        raise ValueError("row count mismatch")
    if k == 0:
        if not is_zero(y):
            raise ValueError("no solution: target not in column space")
        return np.empty((0, ny), dtype=object)
    aug = np.concatenate([b, y], axis=1)
    r, piv = rref(aug)
    if any(p >= k for p in piv):
        raise ValueError("no solution: target not in column space")
    if piv != list(range(k)):
        raise ValueError("basis matrix is not of full column rank")
    return r[:k, k:]


def inverse(m: np.ndarray, field: Field | None = None) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of non-square matrix")
    if n == 0:
        return m.copy()
    one = field.one if field else (m.flat[0] * 0 + 1)
    eye = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            eye[i, j] = one if i == j else one * 0
    return solve(m, eye)


def kernel(m: np.ndarray, field: Field = RATIONAL) -> np.ndarray:
    """Basis of the right null space, as columns."""
    nrows, ncols = m.shape
    if nrows == 0:
        return identity(ncols, field)
    r, piv = rref(m)
    free = [c for c in range(ncols) if c not in piv]
    out = zeros(ncols, len(free), field)
    for j, f in enumerate(free):
        out[f, j] = field.one
        for i, p in enumerate(piv):
            out[p, j] = -r[i, f]
    return out


def det(m: np.ndarray):
    n = m.shape[0]
    a = m.copy()
    d = a.flat[0] * 0 + 1 if n else 1
    for c in range(n):
        p = next((i for i in range(c, n) if a[i, c] != 0), None)
        if p is None:
            return d * 0
        if p != c:
            a[[c, p]] = a[[p, c]]
            d = -d
        d = d * a[c, c]
        inv = 1 / a[c, c]
        for i in range(c + 1, n):
            if a[i, c] != 0:
                a[i] = a[i] - a[i, c] * inv * a[c]
    return d


def to_strings(m: np.ndarray, field: Field) -> list:
    return [[field.format(x) for x in row] for row in m]
