"""Implicit and explicit L1 / Riesz finite-difference schemes in one dimension.

Unknowns are the interior nodes ``1..N-1``.  Boundary values are read from the
problem at each time level; in the implicit scheme their columns of the Riesz
rows are moved to the right-hand side.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from fracdiff.coefficients import caputo_weights, gamma_fn, riesz_matrix, riesz_scale
from fracdiff.linalg import lu_solve
from fracdiff.problem import Field, ProblemSpec1D

__all__ = [
    "NonFiniteFieldError",
    "SolveResult1D",
    "StabilityWarning",
    "memory_term",
    "solve_explicit_1d",
    "solve_implicit_1d",
]

log = logging.getLogger(__name__)


class NonFiniteFieldError(FloatingPointError):
    """The solution stopped being finite; ``step`` is the offending time level."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"non-finite solution at step {step}")


class StabilityWarning(UserWarning):
    """An explicit run violates its sufficient stability bound."""


@dataclass
class SolveResult1D:
    #: ``None`` only when an explicit run was stopped by ``stop_on_blowup``
    final: Optional[Field]
    history: Optional[np.ndarray] = None
    #: ``max |u^k|`` for k = 0..N_t
    max_abs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    #: set when a blow-up was caught with ``stop_on_blowup``
    blowup_step: Optional[int] = None

    @property
    def fields(self) -> list[Field]:
        if self.history is None:
            raise ValueError("history was not kept for this solve")
        tau = self.final.time_label / (len(self.history) - 1)
        return [Field(u, k * tau) for k, u in enumerate(self.history)]


def memory_term(l: np.ndarray, history: np.ndarray, k: int) -> np.ndarray:
    """History contribution to the step ``k -> k+1``.

    Returns ``sum_{s=0}^{k-1} (l_s - l_{s+1}) u^{k-s} + l_k u^0``; for
    ``k = 0`` this is just ``u^0``.  *history* holds levels ``0..k`` along its
    first axis.
    """
    if k == 0:
        return history[0].copy()
    diffs = l[:k] - l[1 : k + 1]
    # levels k, k-1, ..., 1
    recent = history[k:0:-1]
    return np.tensordot(diffs, recent, axes=1) + l[k] * history[0]


def _check_finite(u: np.ndarray, step: int) -> None:
    if not np.all(np.isfinite(u)):
        raise NonFiniteFieldError(step)


def solve_implicit_1d(spec: ProblemSpec1D, keep_history: bool = False) -> SolveResult1D:
    """Unconditionally stable implicit scheme.

    Each step solves ``(I - diag(w) G) u^{k+1} = memory + mu f^{k+1}`` on the
    interior, where ``w_i = mu * (-kappa c_i^{k+1}) / (Gamma(4-alpha) dx^alpha)``.
    """
    N = spec.grid.N
    Nt = spec.time.N
    tau = spec.time.tau
    x = spec.grid.nodes
    gamma = spec.gamma

    l = caputo_weights(gamma, Nt).weights
    mu = gamma_fn(2.0 - gamma) * tau**gamma
    G = riesz_matrix(spec.alpha, N)
    scale = mu * riesz_scale(spec.alpha, spec.grid.dx)
    G_int = G[1:N, 1:N]
    G_left = G[1:N, 0]
    G_right = G[1:N, N]
    eye = np.eye(N - 1)
    xi = x[1:N]

    H = np.empty((Nt + 1, N + 1))
    H[0] = np.broadcast_to(spec.u0(x), x.shape)
    _check_finite(H[0], 0)
    max_abs = np.empty(Nt + 1)
    max_abs[0] = np.max(np.abs(H[0]))

    for k in range(Nt):
        t1 = (k + 1) * tau
        w = scale * np.broadcast_to(spec.c(xi, t1), xi.shape)
        ul = float(spec.boundary_left(t1))
        ur = float(spec.boundary_right(t1))

        A = eye - w[:, None] * G_int
        rhs = memory_term(l, H[:, 1:N], k)
        rhs += mu * np.broadcast_to(spec.f(xi, t1), xi.shape)
        rhs += w * (G_left * ul + G_right * ur)

        H[k + 1, 0] = ul
        H[k + 1, N] = ur
        H[k + 1, 1:N] = lu_solve(A, rhs)
        _check_finite(H[k + 1], k + 1)
        max_abs[k + 1] = np.max(np.abs(H[k + 1]))

    return SolveResult1D(
        final=Field(H[Nt].copy(), Nt * tau),
        history=H if keep_history else None,
        max_abs=max_abs,
    )


def solve_explicit_1d(spec: ProblemSpec1D, keep_history: bool = False,
                      stop_on_blowup: Optional[float] = None,
                      warn: bool = True) -> SolveResult1D:
    """Explicit scheme; coefficients and source are taken at the old level ``t_k``.

    The first step uses ``c`` and ``f`` at ``t_0``.  When the sufficient
    stability bound is violated a :class:`StabilityWarning` is issued and the
    run proceeds.  With *stop_on_blowup* set, the run stops (without raising)
    once ``max |u|`` exceeds that threshold or turns non-finite and the step
    is recorded in ``blowup_step``.
    """
    if warn:
        from fracdiff.stability import explicit_bound_1d

        report = explicit_bound_1d(spec)
        if not report.satisfied:
            warnings.warn(
                f"explicit 1D run outside the stability bound: "
                f"tau^gamma/dx^alpha = {report.actual:.6g} > {report.bound:.6g}",
                StabilityWarning, stacklevel=2)

    N = spec.grid.N
    Nt = spec.time.N
    tau = spec.time.tau
    x = spec.grid.nodes
    gamma = spec.gamma

    l = caputo_weights(gamma, Nt).weights
    mu = gamma_fn(2.0 - gamma) * tau**gamma
    G = riesz_matrix(spec.alpha, N)
    scale = mu * riesz_scale(spec.alpha, spec.grid.dx)
    G_rows = G[1:N]
    xi = x[1:N]

    H = np.empty((Nt + 1, N + 1))
    H[0] = np.broadcast_to(spec.u0(x), x.shape)
    _check_finite(H[0], 0)
    max_abs = np.full(Nt + 1, np.nan)
    max_abs[0] = np.max(np.abs(H[0]))
    blowup = None
    last = 0

    for k in range(Nt):
        t0 = k * tau
        t1 = (k + 1) * tau
        sigma = scale * np.broadcast_to(spec.c(xi, t0), xi.shape)

        # u^k - sum_{s=1}^{k} l_s (u^{k+1-s} - u^{k-s}) telescoped
        if k == 0:
            base = H[0, 1:N].copy()
        else:
            base = (1.0 - l[1]) * H[k, 1:N] + l[k] * H[0, 1:N]
            if k > 1:
                diffs = l[1:k] - l[2 : k + 1]
                base += np.tensordot(diffs, H[k - 1 : 0 : -1, 1:N], axes=1)
        new = base + sigma * (G_rows @ H[k]) + mu * np.broadcast_to(spec.f(xi, t0), xi.shape)

        H[k + 1, 0] = float(spec.boundary_left(t1))
        H[k + 1, N] = float(spec.boundary_right(t1))
        H[k + 1, 1:N] = new
        last = k + 1
        amax = np.max(np.abs(H[k + 1]))
        max_abs[k + 1] = amax
        if stop_on_blowup is not None and not (amax <= stop_on_blowup):
            blowup = k + 1
            break
        _check_finite(H[k + 1], k + 1)

    if blowup is not None:
        return SolveResult1D(
            final=None,
            history=H[: last + 1] if keep_history else None,
            max_abs=max_abs[: last + 1],
            blowup_step=blowup,
        )

    return SolveResult1D(
        final=Field(H[Nt].copy(), Nt * tau),
        history=H if keep_history else None,
        max_abs=max_abs,
    )
