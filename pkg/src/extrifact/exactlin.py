"""Dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays holding residues in [0, p).  All routines
pivot on the leftmost nonzero column and the topmost available row, so every
basis produced here is reproducible bit-for-bit.
"""
from __future__ import annotations

import os
from typing import Optional

import numpy as np

from .errors import InputError

_DEFAULT_P = 2


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def set_characteristic(p: int) -> None:
    """Set the process-wide default characteristic."""
    global _DEFAULT_P
    if not _is_prime(int(p)):
        raise InputError(f"field characteristic must be prime, got {p}")
    _DEFAULT_P = int(p)


def characteristic() -> int:
    return _DEFAULT_P


def characteristic_from_env(default: int = 2) -> int:
    raw = os.environ.get("EXTRIFACT_FIELD_CHAR")
    if raw is None or raw == "":
        return default
    try:
        p = int(raw)
    except ValueError:
        raise InputError(f"EXTRIFACT_FIELD_CHAR must be an integer, got {raw!r}")
    if not _is_prime(p):
        raise InputError(f"EXTRIFACT_FIELD_CHAR must be prime, got {p}")
    return p


def _p(p: Optional[int]) -> int:
    return _DEFAULT_P if p is None else p


def as_matrix(m, p: Optional[int] = None, shape=None) -> np.ndarray:
    p = _p(p)
    a = np.array(m, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise InputError(f"expected a 2-d matrix, got shape {a.shape}")
    return np.mod(a, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(k: int) -> np.ndarray:
    return np.eye(k, dtype=np.int64)


def inv_scalar(a: int, p: Optional[int] = None) -> int:
    p = _p(p)
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(a, p - 2, p)


def matmul(a: np.ndarray, b: np.ndarray, p: Optional[int] = None) -> np.ndarray:
    p = _p(p)
    if a.shape[1] != b.shape[0]:
        raise InputError(f"cannot multiply {a.shape} by {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    return np.mod(a @ b, p)


def rref(m: np.ndarray, p: Optional[int] = None):
    """Reduced row echelon form and the list of pivot columns."""
    p = _p(p)
    a = np.mod(np.array(m, dtype=np.int64), p)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = np.mod(a[r] * inv_scalar(a[r, c], p), p)
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = np.mod(a[hit] - np.outer(col[hit], a[r]), p)
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray, p: Optional[int] = None) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def kernel_basis(m: np.ndarray, p: Optional[int] = None) -> list:
    """Basis of the null space, one vector per free column.

    Each vector has a 1 at its free column and zeros at the other free
    columns (reduced echelon convention).
    """
    p = _p(p)
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return [identity(cols)[:, j].copy() for j in range(cols)]
    r, pivots = rref(m, p)
    free = [j for j in range(cols) if j not in set(pivots)]
    basis = []
    for j in free:
        v = np.zeros(cols, dtype=np.int64)
        v[j] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-r[i, j]) % p
        basis.append(v)
    return basis


def kernel_matrix(m: np.ndarray, p: Optional[int] = None) -> np.ndarray:
    """Kernel basis stacked as columns."""
    m = np.asarray(m)
    vecs = kernel_basis(m, p)
    if not vecs:
        return zeros(m.shape[1], 0)
    return np.stack(vecs, axis=1)


def solve(m: np.ndarray, b, p: Optional[int] = None) -> Optional[np.ndarray]:
    """Some x with m @ x == b, or None when the system is inconsistent.

    Free variables are set to zero, so the solution is the one supported on
    the leftmost pivot columns.
    """
    p = _p(p)
    m = np.asarray(m, dtype=np.int64)
    b = np.mod(np.asarray(b, dtype=np.int64).reshape(-1), p)
    rows, cols = m.shape
    if b.shape[0] != rows:
        raise InputError(f"right-hand side has length {b.shape[0]}, expected {rows}")
    if rows == 0:
        return np.zeros(cols, dtype=np.int64)
    aug = np.concatenate([m, b.reshape(-1, 1)], axis=1)
    r, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols]
    return x


def solve_matrix(m: np.ndarray, b: np.ndarray, p: Optional[int] = None) -> Optional[np.ndarray]:
    """Solve m @ X == B column by column; None if any column is inconsistent."""
    p = _p(p)
    b = np.asarray(b, dtype=np.int64)
    cols = []
    for j in range(b.shape[1]):
        x = solve(m, b[:, j], p)
        if x is None:
            return None
        cols.append(x)
    if not cols:
        return zeros(m.shape[1], 0)
    return np.stack(cols, axis=1)


def inverse(m: np.ndarray, p: Optional[int] = None) -> np.ndarray:
    p = _p(p)
    m = np.asarray(m, dtype=np.int64)
    k = m.shape[0]
    if m.shape != (k, k):
        raise InputError(f"cannot invert non-square matrix of shape {m.shape}")
    if k == 0:
        return zeros(0, 0)
    r, pivots = rref(np.concatenate([m, identity(k)], axis=1), p)
    if pivots[:k] != list(range(k)):
        raise InputError("matrix is singular")
    return r[:, k:].copy()


def independent_columns(m: np.ndarray, p: Optional[int] = None) -> list:
    """Indices of the greedy (left to right) maximal independent column set."""
    m = np.asarray(m)
    if m.size == 0:
        return []
    return rref(m, p)[1]


def column_space_complement(sub: np.ndarray, ambient: np.ndarray, p: Optional[int] = None) -> list:
    """Indices of columns of `ambient` that extend the span of `sub` greedily."""
    k = sub.shape[1]
    stacked = np.concatenate([sub, ambient], axis=1)
    return [c - k for c in independent_columns(stacked, p) if c >= k]
