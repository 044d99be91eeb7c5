from __future__ import annotations

import numpy as np
import pytest

from fracdiff.linalg import SingularMatrixError, lu_solve, matvec


def test_identity():
    b = np.array([1.0, -2.0, 3.0])
    assert np.array_equal(lu_solve(np.eye(3), b), b)


def test_diagonal():
    x = lu_solve(np.array([[2.0, 0.0], [0.0, 4.0]]), np.array([2.0, 8.0]))
    assert np.allclose(x, [1.0, 2.0], rtol=1e-15)


def test_needs_pivoting():
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(lu_solve(A, np.array([3.0, 5.0])), [5.0, 3.0])


def test_random_residual():
    rng = np.random.default_rng(7)
    A = rng.standard_normal((50, 50)) + 50 * np.eye(50)
    b = rng.standard_normal(50)
    x = lu_solve(A, b)
    r = matvec(A, x) - b
    assert np.max(np.abs(r)) <= 1e-12 * (np.max(np.abs(A)) * np.max(np.abs(x)) + np.max(np.abs(b)))


@pytest.mark.parametrize("n", [1, 5, 37, 200])
def test_roundtrip_diagonally_dominant(n):
    rng = np.random.default_rng(n)
    A = rng.uniform(-1, 1, (n, n))
    A += np.diag(np.sum(np.abs(A), axis=1) + 1.0)
    x = rng.uniform(-1, 1, n)
    x_back = lu_solve(A, matvec(A, x))
    assert np.max(np.abs(x_back - x)) <= 1e-9 * np.max(np.abs(x))


def test_singular():
    with pytest.raises(SingularMatrixError):
        lu_solve(np.array([[1.0, 2.0], [2.0, 4.0]]), np.array([1.0, 1.0]))
    with pytest.raises(SingularMatrixError):
        lu_solve(np.zeros((3, 3)), np.ones(3))


def test_shape_errors():
    with pytest.raises(ValueError):
        lu_solve(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ValueError):
        lu_solve(np.eye(2), np.ones(3))
    with pytest.raises(ValueError):
        lu_solve(np.eye(2), np.array([1.0, np.inf]))
    with pytest.raises(ValueError):
        matvec(np.eye(2), np.ones(3))


def test_matvec_examples():
    v = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(matvec(np.eye(3), v), v)
    assert np.array_equal(matvec(np.zeros((3, 3)), v), np.zeros(3))
    assert np.array_equal(matvec([[3.0]], [2.0]), [6.0])
