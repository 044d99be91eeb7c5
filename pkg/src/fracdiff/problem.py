"""Grids, problem specifications, solution fields and the manufactured benchmarks.

All coefficient, source, initial, boundary and exact-solution callables are
evaluated with numpy arrays (broadcasting over nodes), so plain Python
lambdas built from numpy ufuncs work as well as parsed config expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from fracdiff.coefficients import gamma_fn, validate_space_order

__all__ = [
    "Field",
    "Grid1D",
    "Grid2D",
    "ProblemSpec1D",
    "ProblemSpec2D",
    "TimeGrid",
    "benchmark_1d",
    "benchmark_2d",
    "max_error",
    "validate_time_order",
]

#: Tolerance on initial/boundary data agreement at t = 0.
COMPAT_TOL = 1e-10


def validate_time_order(gamma: float) -> None:
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"time order must lie in (0, 1], got {gamma!r}")


# {{{ grids


@dataclass(frozen=True)
class Grid1D:
    x_left: float
    x_right: float
    N: int

    def __post_init__(self):
        if not self.x_left < self.x_right:
            raise ValueError(
                f"empty interval [{self.x_left}, {self.x_right}]")
        if self.N < 3:
            raise ValueError(f"need at least 3 cells, got N={self.N}")

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.N

    @property
    def nodes(self) -> np.ndarray:
        return self.x_left + np.arange(self.N + 1) * self.dx


@dataclass(frozen=True)
class Grid2D:
    x: Grid1D
    y: Grid1D

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x.N + 1, self.y.N + 1)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Node coordinates as two ``(N_x+1, N_y+1)`` arrays (``ij`` indexing)."""
        return np.meshgrid(self.x.nodes, self.y.nodes, indexing="ij")


@dataclass(frozen=True)
class TimeGrid:
    T: float
    N: int

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"final time must be positive, got {self.T!r}")
        if self.N < 1:
            raise ValueError(f"need at least one time step, got {self.N}")

    @property
    def tau(self) -> float:
        return self.T / self.N

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.N + 1) * self.tau


# }}}


# {{{ fields


@dataclass
class Field:
    """Nodal values (boundary included) at time ``time_label``.

    1D fields have shape ``(N_x+1,)``; 2D fields ``(N_x+1, N_y+1)`` with
    the first index along x.
    """

    values: np.ndarray
    time_label: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"non-finite entries in field at t={self.time_label}")

    def to_csv(self, path, grid) -> None:
        """Write ``x[,y],u`` rows with the time label as a comment header."""
        with open(path, "w", newline="") as fh:
            fh.write(self.csv_text(grid))

    def csv_text(self, grid) -> str:
        lines = [f"# t={float(self.time_label)!r}"]
        if isinstance(grid, Grid2D):
            X, Y = grid.mesh()
            lines.append("x,y,u")
            for xv, yv, uv in zip(X.ravel().tolist(), Y.ravel().tolist(),
                                  self.values.ravel().tolist()):
                lines.append(f"{xv!r},{yv!r},{uv!r}")
        else:
            lines.append("x,u")
            for xv, uv in zip(grid.nodes.tolist(), self.values.tolist()):
                lines.append(f"{xv!r},{uv!r}")
        return "\n".join(lines) + "\n"


# }}}


# {{{ problem specs


def _full(value, shape) -> np.ndarray:
    return np.broadcast_to(np.asarray(value, dtype=np.float64), shape)


@dataclass(frozen=True)
class ProblemSpec1D:
    """One-dimensional Caputo-Riesz diffusion problem.

    ``c(x, t)`` and ``f(x, t)`` take arrays; ``u0(x)`` and the boundary
    functions ``boundary_left(t)``, ``boundary_right(t)`` likewise.
    """

    grid: Grid1D
    time: TimeGrid
    gamma: float
    alpha: float
    c: Callable
    f: Callable
    u0: Callable
    boundary_left: Callable
    boundary_right: Callable
    exact: Optional[Callable] = None
    name: str = "problem-1d"

    def __post_init__(self):
        validate_time_order(self.gamma)
        validate_space_order(self.alpha)
        x = self.grid.nodes
        t = self.time.nodes
        cv = _full(self.c(x[None, :], t[:, None]), (t.size, x.size))
        if not np.all(np.isfinite(cv)):
            raise ValueError("coefficient c is not finite on the grid")
        if np.any(cv < 0):
            raise ValueError("coefficient c must be nonnegative on all nodes")
        u0 = _full(self.u0(x), x.shape)
        if (abs(u0[0] - float(self.boundary_left(0.0))) > COMPAT_TOL
                or abs(u0[-1] - float(self.boundary_right(0.0))) > COMPAT_TOL):
            raise ValueError("initial data disagrees with boundary data at t=0")

    def c_max(self) -> float:
        x = self.grid.nodes
        t = self.time.nodes
        return float(np.max(_full(self.c(x[None, :], t[:, None]), (t.size, x.size))))

    def with_time(self, time: TimeGrid) -> ProblemSpec1D:
        return _replace(self, time=time)

    def with_grid(self, grid: Grid1D) -> ProblemSpec1D:
        return _replace(self, grid=grid)


@dataclass(frozen=True)
class ProblemSpec2D:
    """Two-dimensional problem on a rectangle.

    ``c, d, f`` are functions of ``(x, y, t)``, ``u0`` of ``(x, y)`` and the
    Dirichlet data ``B`` of ``(x, y, t)``; only its boundary values are used.
    """

    grid: Grid2D
    time: TimeGrid
    gamma: float
    alpha: float
    beta: float
    c: Callable
    d: Callable
    f: Callable
    u0: Callable
    B: Callable
    exact: Optional[Callable] = None
    name: str = "problem-2d"

    def __post_init__(self):
        validate_time_order(self.gamma)
        validate_space_order(self.alpha)
        validate_space_order(self.beta)
        X, Y = self.grid.mesh()
        shape = X.shape
        for label, fn in (("c", self.c), ("d", self.d)):
            for t in self.time.nodes:
                v = _full(fn(X, Y, t), shape)
                if not np.all(np.isfinite(v)):
                    raise ValueError(f"coefficient {label} is not finite on the grid")
                if np.any(v < 0):
                    raise ValueError(
                        f"coefficient {label} must be nonnegative on all nodes")
        u0 = _full(self.u0(X, Y), shape)
        b0 = _full(self.B(X, Y, 0.0), shape)
        mask = boundary_mask(shape)
        if np.any(np.abs(u0[mask] - b0[mask]) > COMPAT_TOL):
            raise ValueError("initial data disagrees with boundary data at t=0")

    def with_time(self, time: TimeGrid) -> ProblemSpec2D:
        return _replace(self, time=time)


def boundary_mask(shape) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    mask[0, :] = mask[-1, :] = True
    mask[:, 0] = mask[:, -1] = True
    return mask


def _replace(spec, **changes):
    import dataclasses

    return dataclasses.replace(spec, **changes)


# }}}


# {{{ benchmarks


def _riesz_bracket(z, nu: float):
    """Bracket in the manufactured forcing: Riesz derivative of z^2 (1-z)^2 up to ``-1/cos``."""
    w = 1.0 - z
    return (
        (z ** (2 - nu) + w ** (2 - nu)) / gamma_fn(3 - nu)
        - 6.0 * (z ** (3 - nu) + w ** (3 - nu)) / gamma_fn(4 - nu)
        + 12.0 * (z ** (4 - nu) + w ** (4 - nu)) / gamma_fn(5 - nu)
    )


def _zero(*args):
    return np.zeros(np.broadcast(*[np.asarray(a) for a in args]).shape)


def benchmark_1d(alpha: float, gamma: float, N: int = 40,
                 Nt: int = 20, T: float = 0.5) -> ProblemSpec1D:
    """Manufactured problem on ``[0, 1]`` with exact ``t^(2+gamma) x^2 (1-x)^2``.

    Coefficient ``c = x^alpha t^(1-gamma)``, zero initial and boundary data.
    """
    validate_space_order(alpha)
    validate_time_order(gamma)
    ga = gamma_fn(3.0 + gamma)
    cos_a = math.cos(alpha * math.pi / 2.0)

    def c(x, t):
        return np.asarray(x, dtype=float) ** alpha * np.asarray(t, dtype=float) ** (1.0 - gamma)

    def f(x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        return (0.5 * ga * t**2 * x**2 * (x - 1.0) ** 2
                + t**3 * x**alpha / cos_a * _riesz_bracket(x, alpha))

    def exact(x, t):
        x = np.asarray(x, dtype=float)
        return np.asarray(t, dtype=float) ** (2.0 + gamma) * x**2 * (1.0 - x) ** 2

    return ProblemSpec1D(
        grid=Grid1D(0.0, 1.0, N),
        time=TimeGrid(T, Nt),
        gamma=gamma,
        alpha=alpha,
        c=c,
        f=f,
        u0=lambda x: _zero(x),
        boundary_left=lambda t: _zero(t),
        boundary_right=lambda t: _zero(t),
        exact=exact,
        name=f"bench1d(alpha={alpha}, gamma={gamma})",
    )


def benchmark_2d(alpha: float, beta: float, gamma: float, N: int = 10,
                 Nt: int = 5, T: float = 0.5) -> ProblemSpec2D:
    """Manufactured problem on the unit square.

    Exact ``t^(2+gamma) x^2 (1-x)^2 y^2 (1-y)^2`` with coefficients
    ``c = 2 x^alpha y^beta t^(1-gamma)`` and ``d = 2 x^beta y^alpha t^(1-gamma)``;
    the forcing is derived so that the exact solution satisfies the equation
    with these coefficients.
    """
    validate_space_order(alpha)
    validate_space_order(beta)
    validate_time_order(gamma)
    ga = gamma_fn(3.0 + gamma)
    cos_a = math.cos(alpha * math.pi / 2.0)
    cos_b = math.cos(beta * math.pi / 2.0)

    def c(x, y, t):
        return 2.0 * x**alpha * y**beta * np.asarray(t, dtype=float) ** (1.0 - gamma)

    def d(x, y, t):
        return 2.0 * x**beta * y**alpha * np.asarray(t, dtype=float) ** (1.0 - gamma)

    def f(x, y, t):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        t = np.asarray(t, dtype=float)
        sx = x**2 * (x - 1.0) ** 2
        sy = y**2 * (y - 1.0) ** 2
        return (0.5 * ga * t**2 * sx * sy
                + 2.0 * t**3 * x**alpha * y**beta * sy / cos_a * _riesz_bracket(x, alpha)
                + 2.0 * t**3 * x**beta * sx * y**alpha / cos_b * _riesz_bracket(y, beta))

    def exact(x, y, t):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (np.asarray(t, dtype=float) ** (2.0 + gamma)
                * x**2 * (1.0 - x) ** 2 * y**2 * (1.0 - y) ** 2)

    return ProblemSpec2D(
        grid=Grid2D(Grid1D(0.0, 1.0, N), Grid1D(0.0, 1.0, N)),
        time=TimeGrid(T, Nt),
        gamma=gamma,
        alpha=alpha,
        beta=beta,
        c=c,
        d=d,
        f=f,
        u0=lambda x, y: _zero(x, y),
        B=lambda x, y, t: _zero(x, y, t),
        exact=exact,
        name=f"bench2d(alpha={alpha}, beta={beta}, gamma={gamma})",
    )


# }}}


def max_error(field: Field, exact: Callable, t: float, grid) -> float:
    """Maximum nodal deviation of *field* from ``exact(., t)`` over all nodes."""
    if isinstance(grid, Grid2D):
        X, Y = grid.mesh()
        ref = exact(X, Y, t)
    else:
        ref = exact(grid.nodes, t)
    ref = _full(ref, field.values.shape)
    return float(np.max(np.abs(field.values - ref)))
