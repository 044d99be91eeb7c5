"""Implicit and explicit schemes for the two-dimensional problem.

Interior unknowns ``(i, j)``, ``1 <= i < N_x``, ``1 <= j < N_y`` are ordered
lexicographically with ``j`` running fastest, which is the C-order ravel of
``U[1:-1, 1:-1]``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from fracdiff.coefficients import caputo_weights, gamma_fn, riesz_matrix, riesz_scale
from fracdiff.linalg import lu_solve
from fracdiff.problem import Field, ProblemSpec2D, _full, boundary_mask
from fracdiff.solver1d import NonFiniteFieldError, StabilityWarning, memory_term

__all__ = ["SolveResult2D", "solve_explicit_2d", "solve_implicit_2d"]


@dataclass
class SolveResult2D:
    #: ``None`` only when an explicit run was stopped by ``stop_on_blowup``
    final: Optional[Field]
    history: Optional[np.ndarray] = None
    max_abs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    #: ``||A u - rhs||_inf`` of each implicit step (empty for explicit runs)
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    blowup_step: Optional[int] = None


class _Setup:
    """Quantities shared by both 2D schemes."""

    def __init__(self, spec: ProblemSpec2D):
        self.spec = spec
        self.Nx = spec.grid.x.N
        self.Ny = spec.grid.y.N
        self.Nt = spec.time.N
        self.tau = spec.time.tau
        self.X, self.Y = spec.grid.mesh()
        self.shape = self.X.shape
        self.mask = boundary_mask(self.shape)
        g = spec.gamma
        self.l = caputo_weights(g, self.Nt).weights
        self.mu = gamma_fn(2.0 - g) * self.tau**g
        self.Gx = riesz_matrix(spec.alpha, self.Nx)
        self.Gy = riesz_matrix(spec.beta, self.Ny)
        self.sx = self.mu * riesz_scale(spec.alpha, spec.grid.x.dx)
        self.sy = self.mu * riesz_scale(spec.beta, spec.grid.y.dx)

    def eval(self, fn, t) -> np.ndarray:
        return np.array(_full(fn(self.X, self.Y, t), self.shape))

    def initial(self) -> np.ndarray:
        U0 = np.array(_full(self.spec.u0(self.X, self.Y), self.shape))
        # boundary nodes always carry the Dirichlet data
        U0[self.mask] = self.eval(self.spec.B, 0.0)[self.mask]
        return U0


def _interior(U: np.ndarray) -> np.ndarray:
    return U[1:-1, 1:-1]


def solve_implicit_2d(spec: ProblemSpec2D, keep_history: bool = False) -> SolveResult2D:
    """Unconditionally stable implicit scheme, one dense LU solve per step."""
    s = _Setup(spec)
    Nx, Ny, Nt, tau = s.Nx, s.Ny, s.Nt, s.tau
    nx, ny = Nx - 1, Ny - 1
    # x-coupling acts along the first index, y-coupling along the second
    Kx = np.kron(s.Gx[1:Nx, 1:Nx], np.eye(ny))
    Ky = np.kron(np.eye(nx), s.Gy[1:Ny, 1:Ny])
    eye = np.eye(nx * ny)

    H = np.empty((Nt + 1,) + s.shape)
    H[0] = s.initial()
    if not np.all(np.isfinite(H[0])):
        raise NonFiniteFieldError(0)
    max_abs = np.empty(Nt + 1)
    max_abs[0] = np.max(np.abs(H[0]))
    residuals = np.empty(Nt)

    for k in range(Nt):
        t1 = (k + 1) * tau
        wx = _interior(s.sx * s.eval(spec.c, t1)).ravel()
        wy = _interior(s.sy * s.eval(spec.d, t1)).ravel()
        B = s.eval(spec.B, t1)
        Bb = np.where(s.mask, B, 0.0)

        A = eye - wx[:, None] * Kx - wy[:, None] * Ky
        rhs = _interior(memory_term(s.l, H, k)).ravel()
        rhs += s.mu * _interior(s.eval(spec.f, t1)).ravel()
        # boundary columns of the Riesz rows, moved to the right-hand side
        rhs += wx * _interior(s.Gx @ Bb).ravel()
        rhs += wy * _interior(Bb @ s.Gy.T).ravel()

        sol = lu_solve(A, rhs)
        residuals[k] = np.max(np.abs(A @ sol - rhs))
        H[k + 1] = Bb
        H[k + 1, 1:Nx, 1:Ny] = sol.reshape(nx, ny)
        if not np.all(np.isfinite(H[k + 1])):
            raise NonFiniteFieldError(k + 1)
        max_abs[k + 1] = np.max(np.abs(H[k + 1]))

    return SolveResult2D(
        final=Field(H[Nt].copy(), Nt * tau),
        history=H if keep_history else None,
        max_abs=max_abs,
        residuals=residuals,
    )


def solve_explicit_2d(spec: ProblemSpec2D, keep_history: bool = False,
                      stop_on_blowup: Optional[float] = None,
                      warn: bool = True) -> SolveResult2D:
    """Explicit scheme with coefficients and source at the old level ``t_k``.

    Same warning and blow-up conventions as
    :func:`fracdiff.solver1d.solve_explicit_1d`.
    """
    if warn:
        from fracdiff.stability import explicit_bound_2d

        report = explicit_bound_2d(spec)
        if not report.satisfied:
            warnings.warn(
                f"explicit 2D run outside the stability bound: "
                f"{report.actual:.6g} > {report.bound:.6g}",
                StabilityWarning, stacklevel=2)

    s = _Setup(spec)
    Nx, Ny, Nt, tau, l = s.Nx, s.Ny, s.Nt, s.tau, s.l

    H = np.empty((Nt + 1,) + s.shape)
    H[0] = s.initial()
    if not np.all(np.isfinite(H[0])):
        raise NonFiniteFieldError(0)
    max_abs = np.full(Nt + 1, np.nan)
    max_abs[0] = np.max(np.abs(H[0]))
    blowup = None

    for k in range(Nt):
        t0 = k * tau
        t1 = (k + 1) * tau
        U = H[k]
        if k == 0:
            base = U.copy()
        else:
            base = (1.0 - l[1]) * U + l[k] * H[0]
            if k > 1:
                diffs = l[1:k] - l[2 : k + 1]
                base += np.tensordot(diffs, H[k - 1 : 0 : -1], axes=1)
        new = (base
               + s.sx * s.eval(spec.c, t0) * (s.Gx @ U)
               + s.sy * s.eval(spec.d, t0) * (U @ s.Gy.T)
               + s.mu * s.eval(spec.f, t0))

        B = s.eval(spec.B, t1)
        H[k + 1] = np.where(s.mask, B, new)
        amax = np.max(np.abs(H[k + 1]))
        max_abs[k + 1] = amax
        if stop_on_blowup is not None and not (amax <= stop_on_blowup):
            blowup = k + 1
            break
        if not np.all(np.isfinite(H[k + 1])):
            raise NonFiniteFieldError(k + 1)

    if blowup is not None:
        return SolveResult2D(
            final=None,
            history=H[: blowup + 1] if keep_history else None,
            max_abs=max_abs[: blowup + 1],
            blowup_step=blowup,
        )
    return SolveResult2D(
        final=Field(H[Nt].copy(), Nt * tau),
        history=H if keep_history else None,
        max_abs=max_abs,
    )
