"""Discrete coefficient tables for the Caputo and Riesz fractional operators.

The time-fractional Caputo derivative is discretized with the L1 weights
``l_s = (s+1)^(1-gamma) - s^(1-gamma)``.  The Riesz derivative of order
``nu`` is the ``-kappa_nu``-weighted sum of second-order approximations of the
left and right Riemann-Liouville derivatives; their row weights are the
``p`` (left) and ``q`` (right) tables, built from the ``a`` and ``b`` tables,
and the combined row is ``g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "CaputoWeights",
    "RieszOperator",
    "RieszRowWeights",
    "SingularOrderError",
    "assemble_riesz_operator",
    "caputo_weights",
    "gamma_fn",
    "kappa",
    "left_rl_matrix",
    "left_rl_row",
    "right_rl_matrix",
    "right_rl_row",
    "riesz_matrix",
    "riesz_row",
    "validate_space_order",
]

#: Orders closer than this to 1 are rejected (kappa diverges there).
SINGULAR_ORDER_TOL = 1e-8


class SingularOrderError(ValueError):
    """Raised for a space order where ``cos(nu*pi/2)`` vanishes."""


def gamma_fn(z: float) -> float:
    """Gamma function for positive real arguments."""
    if not z > 0:
        raise ValueError(f"gamma_fn: argument must be positive, got {z!r}")
    return math.gamma(z)


def validate_space_order(nu: float) -> None:
    """Reject space orders outside ``(0, 1) U (1, 2]``."""
    if not (0.0 < nu <= 2.0):
        raise ValueError(f"space order must lie in (0,1) U (1,2], got {nu!r}")
    if abs(math.cos(nu * math.pi / 2.0)) <= SINGULAR_ORDER_TOL:
        raise SingularOrderError(f"space order {nu!r} is too close to 1")


def kappa(nu: float) -> float:
    """Riesz prefactor ``1 / (2 cos(nu*pi/2))``."""
    c = math.cos(nu * math.pi / 2.0)
    if abs(c) <= SINGULAR_ORDER_TOL:
        raise SingularOrderError(f"kappa is singular at nu={nu!r}")
    return 1.0 / (2.0 * c)


# {{{ caputo


@dataclass(frozen=True)
class CaputoWeights:
    gamma: float
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, s):
        return self.weights[s]


def caputo_weights(gamma: float, K: int) -> CaputoWeights:
    """L1 weights ``l_0 .. l_K`` for a Caputo derivative of order *gamma*.

    At ``gamma = 1`` the general formula gives exactly ``(1, 0, 0, ...)``.
    """
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"time order must lie in (0, 1], got {gamma!r}")
    if K < 0:
        raise ValueError(f"step count must be nonnegative, got {K!r}")
    s = np.arange(K + 2, dtype=np.float64)
    powers = s ** (1.0 - gamma)
    powers[0] = 0.0  # 0^0 would give 1 at gamma = 1
    w = powers[1:] - powers[:-1]
    w.setflags(write=False)
    return CaputoWeights(gamma=gamma, weights=w)


# }}}


# {{{ left / right Riemann-Liouville tables


def _a(nu: float, j: int, m: int) -> float:
    # a_{j,.} are nodal values of the fractional integral of order 2 - nu of
    # the piecewise-linear interpolant; at x_0 that integral vanishes, and at
    # nu = 2 it is the identity, so a_{0,0} is 0 or 1 accordingly
    if j == 0:
        return 1.0 if (m == 0 and nu == 2.0) else 0.0
    if m == j:
        return 1.0
    if m > j or m < 0:
        return 0.0
    e = 3.0 - nu
    if m == 0:
        return (j - 1) ** e - j ** (2.0 - nu) * (j - 3 + nu)
    d = j - m
    return (d + 1) ** e - 2.0 * d**e + (d - 1) ** e


def _b(nu: float, j: int, m: int, N: int) -> float:
    # mirror image of the a table: b_{j,m} = a_{N-j,N-m}
    if j == N:
        return 1.0 if (m == N and nu == 2.0) else 0.0
    if m == j:
        return 1.0
    if m < j or m > N:
        return 0.0
    e = 3.0 - nu
    if m == N:
        return (3.0 - nu - N + j) * (N - j) ** (2.0 - nu) + (N - j - 1) ** e
    d = m - j
    return (d + 1) ** e - 2.0 * d**e + (d - 1) ** e


def _check_row_args(nu: float, i: int, N: int) -> None:
    validate_space_order(nu)
    if N < 3:
        raise ValueError(f"need at least 3 cells, got N={N}")
    if not (1 <= i <= N - 1):
        raise IndexError(f"row index {i} outside interior range 1..{N - 1}")


@lru_cache(maxsize=None)
def _left_row(nu: float, i: int, N: int) -> tuple[float, ...]:
    row = [0.0] * (N + 1)
    for m in range(i):
        row[m] = _a(nu, i - 1, m) - 2.0 * _a(nu, i, m) + _a(nu, i + 1, m)
    row[i] = -2.0 * _a(nu, i, i) + _a(nu, i + 1, i)
    row[i + 1] = _a(nu, i + 1, i + 1)
    return tuple(row)


@lru_cache(maxsize=None)
def _right_row(nu: float, i: int, N: int) -> tuple[float, ...]:
    row = [0.0] * (N + 1)
    row[i - 1] = _b(nu, i - 1, i - 1, N)
    row[i] = -2.0 * _b(nu, i, i, N) + _b(nu, i - 1, i, N)
    for m in range(i + 1, N + 1):
        row[m] = (
            _b(nu, i - 1, m, N) - 2.0 * _b(nu, i, m, N) + _b(nu, i + 1, m, N)
        )
    return tuple(row)


def left_rl_row(nu: float, i: int, N: int) -> np.ndarray:
    """Weights ``p_{i,m}``, ``m = 0..N``, of the left Riemann-Liouville operator."""
    _check_row_args(nu, i, N)
    return np.array(_left_row(float(nu), i, N))


def right_rl_row(nu: float, i: int, N: int) -> np.ndarray:
    """Weights ``q_{i,m}``, ``m = 0..N``, of the right Riemann-Liouville operator."""
    _check_row_args(nu, i, N)
    return np.array(_right_row(float(nu), i, N))


def left_rl_matrix(nu: float, N: int) -> np.ndarray:
    """``(N+1) x (N+1)`` matrix of ``p`` rows; boundary rows are zero."""
    P = np.zeros((N + 1, N + 1))
    for i in range(1, N):
        P[i] = left_rl_row(nu, i, N)
    return P


def right_rl_matrix(nu: float, N: int) -> np.ndarray:
    """``(N+1) x (N+1)`` matrix of ``q`` rows; boundary rows are zero."""
    Q = np.zeros((N + 1, N + 1))
    for i in range(1, N):
        Q[i] = right_rl_row(nu, i, N)
    return Q


# }}}


# {{{ riesz


@dataclass(frozen=True)
class RieszRowWeights:
    nu: float
    row_index: int
    weights: np.ndarray


def riesz_row(nu: float, i: int, N: int) -> RieszRowWeights:
    """Combined row ``g_{i,m} = p_{i,m} + q_{i,m}``.

    The piecewise definition of ``g`` reduces to the plain sum because ``p``
    vanishes right of ``i+1`` and ``q`` vanishes left of ``i-1``.
    """
    g = left_rl_row(nu, i, N) + right_rl_row(nu, i, N)
    g.setflags(write=False)
    return RieszRowWeights(nu=nu, row_index=i, weights=g)


@lru_cache(maxsize=64)
def _g_matrix(nu: float, N: int) -> np.ndarray:
    G = np.zeros((N + 1, N + 1))
    for i in range(1, N):
        G[i] = riesz_row(nu, i, N).weights
    G.setflags(write=False)
    return G


def riesz_matrix(nu: float, N: int) -> np.ndarray:
    """Unscaled ``g`` coefficient matrix with zero boundary rows (read-only, cached)."""
    validate_space_order(nu)
    if N < 3:
        raise ValueError(f"need at least 3 cells, got N={N}")
    return _g_matrix(float(nu), int(N))


@dataclass(frozen=True)
class RieszOperator:
    """Dense approximation of the Riesz derivative on a uniform grid.

    ``matrix @ u`` approximates the Riesz derivative at interior nodes;
    boundary rows are zero because boundary values are data.
    """

    nu: float
    kappa: float
    h: float
    matrix: np.ndarray

    def __matmul__(self, u):
        return self.matrix @ u

    def apply(self, u) -> np.ndarray:
        return self.matrix @ np.asarray(u, dtype=np.float64)


def riesz_scale(nu: float, h: float) -> float:
    """Factor ``-kappa_nu / (Gamma(4-nu) h^nu)`` multiplying the ``g`` rows."""
    return -kappa(nu) / (gamma_fn(4.0 - nu) * h**nu)


def assemble_riesz_operator(nu: float, N: int, h: float) -> RieszOperator:
    if not h > 0:
        raise ValueError(f"grid spacing must be positive, got {h!r}")
    k = kappa(nu)
    D = riesz_scale(nu, h) * riesz_matrix(nu, N)
    D.setflags(write=False)
    return RieszOperator(nu=nu, kappa=k, h=h, matrix=D)


# }}}
