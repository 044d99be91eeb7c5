from __future__ import annotations

import math

import numpy as np
import pytest

from fracdiff.coefficients import assemble_riesz_operator, caputo_weights
from fracdiff.problem import (
    Field,
    Grid1D,
    Grid2D,
    ProblemSpec1D,
    ProblemSpec2D,
    TimeGrid,
    benchmark_1d,
    benchmark_2d,
    max_error,
)


def test_grids():
    g = Grid1D(-1.0, 1.0, 4)
    assert g.dx == 0.5
    assert np.allclose(g.nodes, [-1, -0.5, 0, 0.5, 1])
    tg = TimeGrid(0.5, 20)
    assert tg.tau == 0.025 and tg.nodes[-1] == pytest.approx(0.5)
    g2 = Grid2D(Grid1D(0, 1, 4), Grid1D(0, 2, 5))
    X, Y = g2.mesh()
    assert X.shape == g2.shape == (5, 6)
    assert X[2, 0] == 0.5 and Y[0, 3] == pytest.approx(1.2)


@pytest.mark.parametrize("args", [(1.0, 0.0, 4), (0.0, 1.0, 2)])
def test_grid_errors(args):
    with pytest.raises(ValueError):
        Grid1D(*args)


def test_time_grid_errors():
    with pytest.raises(ValueError):
        TimeGrid(0.0, 4)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 0)


def test_benchmark_1d_values():
    spec = benchmark_1d(1.2, 0.9)
    assert spec.exact(0.0, 0.3) == 0.0
    assert spec.exact(1.0, 0.3) == 0.0
    assert spec.exact(0.5, 0.5) == pytest.approx(0.0625 * 0.5**2.9, rel=1e-15)
    assert spec.exact(0.5, 0.5) == pytest.approx(8.3732e-3, rel=1e-4)
    assert spec.c(1.0, 1.0) == pytest.approx(1.0)


def test_benchmark_2d_values():
    spec = benchmark_2d(1.2, 1.3, 0.9)
    X, Y = spec.grid.mesh()
    E = spec.exact(X, Y, 0.4)
    edge = np.concatenate([E[0], E[-1], E[:, 0], E[:, -1]])
    assert np.all(edge == 0.0)
    assert spec.exact(0.5, 0.5, 0.5) == pytest.approx(0.0625**2 * 0.5**2.9, rel=1e-15)


def test_benchmark_2d_swap_symmetry():
    spec = benchmark_2d(1.5, 1.5, 0.5)
    X, Y = spec.grid.mesh()
    for t in (0.1, 0.5):
        assert np.allclose(spec.c(X, Y, t), spec.d(Y, X, t), rtol=1e-14)
        assert np.allclose(spec.f(X, Y, t), spec.f(Y, X, t), rtol=1e-13)


def test_max_error():
    spec = benchmark_1d(1.2, 0.9, N=10)
    x = spec.grid.nodes
    exact = spec.exact(x, 0.5)
    assert max_error(Field(exact, 0.5), spec.exact, 0.5, spec.grid) == 0.0
    shifted = Field(exact + 1e-3, 0.5)
    assert max_error(shifted, spec.exact, 0.5, spec.grid) == pytest.approx(1e-3, rel=1e-12)


def test_field_rejects_nan():
    with pytest.raises(ValueError):
        Field(np.array([0.0, np.nan]), 0.0)


def test_field_csv():
    g = Grid1D(0.0, 1.0, 4)
    text = Field(np.arange(5.0), 0.5).csv_text(g)
    lines = text.splitlines()
    assert lines[0] == "# t=0.5"
    assert lines[1] == "x,u"
    assert lines[3] == "0.25,1.0"
    g2 = Grid2D(Grid1D(0, 1, 3), Grid1D(0, 1, 3))
    lines = Field(np.zeros((4, 4)), 1.0).csv_text(g2).splitlines()
    assert lines[1] == "x,y,u"
    assert len(lines) == 2 + 16


def test_spec_validation():
    z = lambda *a: np.zeros(np.broadcast(*[np.asarray(v) for v in a]).shape)
    base = dict(grid=Grid1D(0, 1, 6), time=TimeGrid(1.0, 3), gamma=0.5, alpha=1.5,
                f=z, u0=z, boundary_left=z, boundary_right=z)
    with pytest.raises(ValueError, match="nonnegative"):
        ProblemSpec1D(c=lambda x, t: x - 0.5, **base)
    with pytest.raises(ValueError, match="disagrees"):
        ProblemSpec1D(c=lambda x, t: 1 + 0 * x, **{**base, "u0": lambda x: 1 + 0 * x})
    with pytest.raises(ValueError):
        ProblemSpec1D(c=lambda x, t: 1 + 0 * x, **{**base, "gamma": 1.2})
    with pytest.raises(ValueError):
        ProblemSpec1D(c=lambda x, t: 1 + 0 * x, **{**base, "alpha": 1.0})


def test_spec_2d_validation():
    z = lambda *a: np.zeros(np.broadcast(*[np.asarray(v) for v in a]).shape)
    grid = Grid2D(Grid1D(0, 1, 4), Grid1D(0, 1, 4))
    with pytest.raises(ValueError, match="nonnegative"):
        ProblemSpec2D(grid, TimeGrid(1.0, 2), 0.5, 1.5, 1.5, c=lambda x, y, t: -1 + 0 * x,
                      d=z, f=z, u0=z, B=z)
    with pytest.raises(ValueError, match="disagrees"):
        ProblemSpec2D(grid, TimeGrid(1.0, 2), 0.5, 1.5, 1.5, c=z, d=z, f=z,
                      u0=lambda x, y: 1 + 0 * x, B=z)


def _truncation_residual(alpha, gamma, N):
    # plug the exact solution into the implicit update, tau = dx, T = 1/2
    spec = benchmark_1d(alpha, gamma, N=N, Nt=N // 2)
    x, t = spec.grid.nodes, spec.time.nodes
    tau = spec.time.tau
    U = np.array([spec.exact(x, tk) for tk in t])
    l = caputo_weights(gamma, len(t)).weights
    mu = math.gamma(2 - gamma) * tau**gamma
    D = assemble_riesz_operator(alpha, N, spec.grid.dx).matrix
    window = slice(N // 4, 3 * N // 4 + 1)
    worst = 0.0
    for k in range(len(t) - 1):
        jumps = np.diff(U[:k + 2], axis=0)[::-1]
        caputo = (l[:k + 1, None] * jumps).sum(axis=0) / mu
        r = caputo - spec.c(x, t[k + 1]) * (D @ U[k + 1]) - spec.f(x, t[k + 1])
        worst = max(worst, np.max(np.abs(r[window])))
    return worst


@pytest.mark.parametrize("alpha, gamma", [(1.2, 0.9), (1.8, 0.5), (1.5, 0.1)])
def test_forcing_consistency(alpha, gamma):
    # endpoint singularities of the Riesz derivative dominate the max over all
    # nodes, so the residual is measured on the fixed window [1/4, 3/4]
    res = [_truncation_residual(alpha, gamma, N) for N in (20, 40, 80, 160)]
    rates = np.log2(np.array(res[:-1]) / np.array(res[1:]))
    target = min(2.0, 2.0 - gamma)
    assert np.all(np.abs(rates - target) < 0.15), rates
