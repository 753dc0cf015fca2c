"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays whose entries are residues in [0, p).
Every routine is a pure function; inputs are never modified.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ShapeError",
    "as_mat",
    "zeros",
    "identity",
    "mul",
    "rref",
    "rank",
    "solve_right",
    "kernel_basis",
    "row_space_basis",
    "is_prime",
    "inverse",
]


class ShapeError(ValueError):
    """Raised when matrix dimensions are incompatible."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def as_mat(data, p: int, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce nested lists or arrays to a reduced int64 matrix."""
    m = np.array(data, dtype=np.int64)
    if m.size == 0:
        r = rows if rows is not None else (m.shape[0] if m.ndim >= 1 else 0)
        c = cols if cols is not None else (m.shape[1] if m.ndim == 2 else 0)
        return np.zeros((r, c), dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    return np.mod(m, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    return np.mod(a @ b, p)


def _inv(x: int, p: int) -> int:
    return pow(int(x), p - 2, p)


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with leftmost pivots, topmost rows first.

    Returns the reduced matrix and the list of pivot columns.
    """
    a = np.mod(np.array(m, dtype=np.int64), p)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        if a[r, c] != 1:
            a[r] = np.mod(a[r] * _inv(a[r, c], p), p)
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = np.mod(a[hit] - np.outer(col[hit], a[r]), p)
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def row_space_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Nonzero rows of the reduced echelon form."""
    if m.shape[0] == 0:
        return np.zeros((0, m.shape[1]), dtype=np.int64)
    r, piv = rref(m, p)
    return r[: len(piv)]


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {x : m x = 0}, in canonical pivot order.

    One column per free variable; the free coordinate is 1 and the other
    free coordinates vanish, so the transpose of the result is itself in
    reduced echelon form (up to the ordering of free columns).
    """
    rows, cols = m.shape
    if rows == 0:
        return identity(cols)
    r, piv = rref(m, p)
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        out[f, j] = 1
        for i, pc in enumerate(piv):
            out[pc, j] = (-r[i, f]) % p
    return out


def solve_right(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Some X with a X = b, or None when the system is inconsistent.

    The returned solution sets every free variable to zero.
    """
    if a.shape[0] != b.shape[0]:
        raise ShapeError(f"row mismatch: {a.shape} vs {b.shape}")
    n = a.shape[1]
    k = b.shape[1]
    if a.shape[0] == 0:
        return np.zeros((n, k), dtype=np.int64)
    aug = np.concatenate([a, b], axis=1)
    r, piv = rref(aug, p)
    if any(c >= n for c in piv):
        return None
    x = np.zeros((n, k), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return x


def inverse(a: np.ndarray, p: int) -> np.ndarray | None:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ShapeError("inverse of a non-square matrix")
    x = solve_right(a, identity(n), p)
    if x is None:
        return None
    return x
