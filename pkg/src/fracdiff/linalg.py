"""Dense direct solves for the implicit schemes."""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

__all__ = ["SingularMatrixError", "lu_solve", "matvec"]

#: Pivots smaller than this times ``||A||_inf`` count as singular.
PIVOT_TOL = 1e-14


class SingularMatrixError(np.linalg.LinAlgError):
    pass


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    return A


def matvec(A, v) -> np.ndarray:
    A = _as_matrix(A)
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (A.shape[1],):
        raise ValueError(f"dimension mismatch: {A.shape} @ {v.shape}")
    return A @ v


def lu_solve(A, b) -> np.ndarray:
    """Solve ``A x = b`` by LU factorization with partial pivoting.

    Raises
    ------
    SingularMatrixError
        If a pivot falls below ``PIVOT_TOL * ||A||_inf``.
    """
    A = _as_matrix(A)
    b = np.asarray(b, dtype=np.float64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if b.shape != (n,):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({n},)")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise ValueError("non-finite entries in linear system")

    norm = np.max(np.sum(np.abs(A), axis=1)) if n else 0.0
    if n == 0:
        return np.zeros(0)
    if norm == 0.0:
        raise SingularMatrixError("zero matrix")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) < PIVOT_TOL * norm:
        k = int(np.argmin(pivots))
        raise SingularMatrixError(f"pivot {k} is numerically zero ({pivots[k]:.3e})")
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
