"""Dense linear algebra substrate: least squares, rank, null-space bases.

All rank decisions use Householder QR with column pivoting and a relative
threshold on the factor diagonal, so they behave consistently across
perturbation magnitudes. Singular-value machinery is deliberately avoided.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import RankDeficientError

DEFAULT_RANK_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d float array and reject non-finite entries."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got ndim={a.ndim}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def as_vector(y) -> np.ndarray:
    """Coerce to a 1-d float array and reject non-finite entries."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError(f"expected a 1-d array, got ndim={y.ndim}")
    if y.size and not np.all(np.isfinite(y)):
        raise ValueError("vector entries must be finite")
    return y


def _pivoted_qr_rank(r: np.ndarray, tol: float) -> int:
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        return 0
    return int(np.count_nonzero(diag > tol * diag[0]))


def least_squares(a, y, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Minimum-residual solution of ``a @ z ~= y`` for full-column-rank ``a``.

    Solves through a pivoted QR factorization rather than forming the
    normal equations, so conditioning is that of ``a`` itself.

    Raises
    ------
    RankDeficientError
        If the numerical column rank (pivot magnitudes relative to the
        largest, threshold ``tol``) falls short of the column count.
    """
    a = as_matrix(a)
    y = as_vector(y)
    rows, cols = a.shape
    if y.shape[0] != rows:
        raise ValueError(f"rhs length {y.shape[0]} != row count {rows}")
    if cols == 0:
        return np.zeros(0)
    if rows < cols:
        raise RankDeficientError(f"system is wide ({rows}x{cols}); cannot have full column rank")
    q, r, perm = scipy.linalg.qr(a, mode="economic", pivoting=True)
    rank = _pivoted_qr_rank(r, tol)
    if rank < cols:
        raise RankDeficientError(f"numerical column rank {rank} < {cols}")
    z_perm = scipy.linalg.solve_triangular(r, q.T @ y, lower=False)
    z = np.empty(cols)
    z[perm] = z_perm
    return z


def column_rank(a, tol: float = DEFAULT_RANK_TOL) -> int:
    """Numerical column rank from pivoted-QR diagonal magnitudes."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_matrix(a)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    _, r, _ = scipy.linalg.qr(a, mode="economic", pivoting=True)
    return _pivoted_qr_rank(r, tol)


def nullspace_basis(a, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the numerical null space of ``a``.

    Returns an ``(n, n - rank)`` matrix whose columns are orthonormal and
    satisfy ``norm(a @ col) <= tol * norm(a)``. Full column rank yields a
    zero-column result. The basis comes from the trailing columns of the
    full Q factor of ``a.T`` (they span the orthogonal complement of the
    row space), keeping the whole module QR-only.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_matrix(a)
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0))
    if rows == 0:
        return np.eye(cols)
    q, r, _ = scipy.linalg.qr(a.T, mode="full", pivoting=True)
    rank = _pivoted_qr_rank(r, tol)
    return np.ascontiguousarray(q[:, rank:])
