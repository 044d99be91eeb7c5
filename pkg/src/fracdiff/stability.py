"""Sufficient step-size bounds for the explicit schemes.

In 1D the explicit scheme is stable when

    tau^gamma / dx^alpha <= -Gamma(4-alpha) (1 - 2^-gamma)
                            / (4 kappa_alpha C_max Gamma(2-gamma) (1 - 2^(1-alpha)))

with ``C_max`` the largest nodal value of ``c``.  In 2D the condition reads
``tau^gamma/dx^alpha + tau^gamma/dy^beta <= (1 - 2^-gamma) / (Gamma(2-gamma) C_max)``
where ``C_max`` maximizes ``-kappa_nu (4 - 2^(3-nu)) coef / Gamma(4-nu)`` over
both directions and all nodes.  Both bounds are sufficient only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracdiff.coefficients import gamma_fn, kappa
from fracdiff.problem import ProblemSpec1D, ProblemSpec2D, _full

__all__ = [
    "StabilityReport",
    "bound_1d",
    "bound_2d",
    "explicit_bound_1d",
    "explicit_bound_2d",
]

#: Smallest accepted space order; the 1D bound degenerates as alpha -> 1.
MIN_ORDER = 1.0 + 1e-6


@dataclass(frozen=True)
class StabilityReport:
    scheme: str
    bound: float
    actual: float
    satisfied: bool
    c_max: float
    #: 2D only: maximum of the scaled coefficient bracket
    bracket_max: float = math.nan

    @property
    def unconditional(self) -> bool:
        return math.isinf(self.bound)

    def render(self) -> str:
        lines = [
            f"scheme:    {self.scheme}",
            f"c_max:     {self.c_max:.6g}",
        ]
        if self.scheme == "explicit-2d":
            lines.append(f"bracket:   {self.bracket_max:.6g}")
        bound = "unconditional" if self.unconditional else f"{self.bound:.6g}"
        lines += [
            f"bound:     {bound}",
            f"actual:    {self.actual:.6g}",
            f"satisfied: {'yes' if self.satisfied else 'NO'}",
        ]
        return "\n".join(lines)

    CSV_HEADER = "scheme,bound,actual,satisfied,c_max,bracket_max"

    def csv_row(self) -> str:
        return (f"{self.scheme},{self.bound!r},{self.actual!r},"
                f"{int(self.satisfied)},{self.c_max!r},{self.bracket_max!r}")


def _check_order(nu: float, label: str) -> None:
    if not (MIN_ORDER <= nu <= 2.0):
        raise ValueError(
            f"explicit bound needs {label} in (1, 2], got {nu!r}")


def bound_1d(alpha: float, gamma: float, c_max: float) -> float:
    """Right-hand side of the 1D condition; ``inf`` when ``c_max == 0``."""
    _check_order(alpha, "alpha")
    if c_max <= 0.0:
        return math.inf
    num = -gamma_fn(4.0 - alpha) * (1.0 - 2.0**-gamma)
    den = (4.0 * kappa(alpha) * c_max * gamma_fn(2.0 - gamma)
           * (1.0 - 2.0 ** (1.0 - alpha)))
    return num / den


def bracket_2d(alpha: float, beta: float, c, d) -> np.ndarray:
    """Nodewise maximum of the two scaled coefficient terms."""
    ca = -kappa(alpha) * (4.0 - 2.0 ** (3.0 - alpha)) / gamma_fn(4.0 - alpha)
    cb = -kappa(beta) * (4.0 - 2.0 ** (3.0 - beta)) / gamma_fn(4.0 - beta)
    return np.maximum(ca * np.asarray(c), cb * np.asarray(d))


def bound_2d(gamma: float, bracket_max: float) -> float:
    if bracket_max <= 0.0:
        return math.inf
    return (1.0 - 2.0**-gamma) / (gamma_fn(2.0 - gamma) * bracket_max)


def explicit_bound_1d(spec: ProblemSpec1D) -> StabilityReport:
    c_max = spec.c_max()
    bound = bound_1d(spec.alpha, spec.gamma, c_max)
    actual = spec.time.tau**spec.gamma / spec.grid.dx**spec.alpha
    return StabilityReport("explicit-1d", bound, actual, actual <= bound, c_max)


def explicit_bound_2d(spec: ProblemSpec2D) -> StabilityReport:
    _check_order(spec.alpha, "alpha")
    _check_order(spec.beta, "beta")
    X, Y = spec.grid.mesh()
    c_max = 0.0
    bmax = 0.0
    for t in spec.time.nodes:
        c = _full(spec.c(X, Y, t), X.shape)
        d = _full(spec.d(X, Y, t), X.shape)
        c_max = max(c_max, float(np.max(c)), float(np.max(d)))
        bmax = max(bmax, float(np.max(bracket_2d(spec.alpha, spec.beta, c, d))))
    bound = bound_2d(spec.gamma, bmax)
    tg = spec.time.tau**spec.gamma
    actual = (tg / spec.grid.x.dx**spec.alpha
              + tg / spec.grid.y.dx**spec.beta)
    return StabilityReport("explicit-2d", bound, actual, actual <= bound,
                           c_max, bracket_max=bmax)
