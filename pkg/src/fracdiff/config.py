"""JSON run configuration.

Example (1D)::

    {
      "dimension": 1,
      "domain": {"x": [0, 1]},
      "T": 0.5,
      "orders": {"gamma": 0.9, "alpha": 1.2},
      "grid": {"Nx": 40, "Nt": 20},
      "scheme": "implicit",
      "coefficients": {"c": "x^1.2 * t^0.1"},
      "source": "...",
      "initial": "0",
      "boundary": {"left": "0", "right": "0"},
      "exact": "t^2.9 * x^2 * (1-x)^2"
    }

In 2D ``domain`` also has ``y``, ``orders`` has ``beta``, ``grid`` has
``Ny``, ``coefficients`` has ``d`` and ``boundary`` is a single expression
in ``x, y, t``.  A 1D ``boundary`` may also be one expression in ``x, t``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional, Union

from fracdiff.expression import Expr, ExpressionError, evaluate, parse
from fracdiff.problem import (
    Grid1D,
    Grid2D,
    ProblemSpec1D,
    ProblemSpec2D,
    TimeGrid,
)

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config"]

REQUIRED_KEYS = ("dimension", "domain", "T", "orders", "grid", "scheme",
                 "coefficients", "source", "initial", "boundary")
OPTIONAL_KEYS = ("exact", "output")


class ConfigError(ValueError):
    """Schema or expression problem; ``key`` is the dotted path of the offending field."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


@dataclass(frozen=True)
class RunConfig:
    dimension: int
    x_range: tuple[float, float]
    y_range: Optional[tuple[float, float]]
    T: float
    gamma: float
    alpha: float
    beta: Optional[float]
    Nx: int
    Ny: Optional[int]
    Nt: int
    scheme: str
    c: Expr
    d: Optional[Expr]
    source: Expr
    initial: Expr
    #: 1D: ``(left, right)`` expressions in t (or one shared expression in x, t);
    #: 2D: one expression in x, y, t
    boundary: Union[Expr, tuple[Expr, Expr]]
    exact: Optional[Expr] = None
    output: Optional[str] = None

    def to_problem(self) -> Union[ProblemSpec1D, ProblemSpec2D]:
        time = TimeGrid(self.T, self.Nt)
        if self.dimension == 1:
            grid = Grid1D(self.x_range[0], self.x_range[1], self.Nx)
            xl, xr = self.x_range
            if isinstance(self.boundary, tuple):
                bl, br = self.boundary
                left = lambda t: evaluate(bl, x=xl, t=t)
                right = lambda t: evaluate(br, x=xr, t=t)
            else:
                b = self.boundary
                left = lambda t: evaluate(b, x=xl, t=t)
                right = lambda t: evaluate(b, x=xr, t=t)
            exact = self.exact
            return ProblemSpec1D(
                grid=grid, time=time, gamma=self.gamma, alpha=self.alpha,
                c=lambda x, t: evaluate(self.c, x=x, t=t),
                f=lambda x, t: evaluate(self.source, x=x, t=t),
                u0=lambda x: evaluate(self.initial, x=x),
                boundary_left=left, boundary_right=right,
                exact=(lambda x, t: evaluate(exact, x=x, t=t)) if exact else None,
                name="config-1d",
            )
        grid = Grid2D(Grid1D(self.x_range[0], self.x_range[1], self.Nx),
                      Grid1D(self.y_range[0], self.y_range[1], self.Ny))
        exact = self.exact
        return ProblemSpec2D(
            grid=grid, time=time, gamma=self.gamma, alpha=self.alpha, beta=self.beta,
            c=lambda x, y, t: evaluate(self.c, x=x, y=y, t=t),
            d=lambda x, y, t: evaluate(self.d, x=x, y=y, t=t),
            f=lambda x, y, t: evaluate(self.source, x=x, y=y, t=t),
            u0=lambda x, y: evaluate(self.initial, x=x, y=y),
            B=lambda x, y, t: evaluate(self.boundary, x=x, y=y, t=t),
            exact=(lambda x, y, t: evaluate(exact, x=x, y=y, t=t)) if exact else None,
            name="config-2d",
        )


# {{{ schema helpers


def _obj(doc: Any, key: str, allowed: tuple[str, ...], required: tuple[str, ...]) -> dict:
    if not isinstance(doc, dict):
        raise ConfigError(key, "expected an object")
    for k in doc:
        if k not in allowed:
            raise ConfigError(f"{key}.{k}" if key else k, "unknown key")
    for k in required:
        if k not in doc:
            raise ConfigError(f"{key}.{k}" if key else k, "missing required key")
    return doc


def _number(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    return float(value)


def _count(value: Any, key: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(key, f"must be >= {minimum}, got {value}")
    return value


def _interval(value: Any, key: str) -> tuple[float, float]:
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError(key, "expected [left, right]")
    lo, hi = _number(value[0], key), _number(value[1], key)
    if not lo < hi:
        raise ConfigError(key, f"empty interval [{lo}, {hi}]")
    return lo, hi


def _expr(value: Any, key: str) -> Expr:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = repr(float(value))
    if not isinstance(value, str):
        raise ConfigError(key, f"expected an expression string, got {value!r}")
    try:
        return parse(value)
    except ExpressionError as exc:
        raise ConfigError(key, f"{exc} in {value!r}") from None


def _space_order(value: Any, key: str) -> float:
    nu = _number(value, key)
    if not (0.0 < nu <= 2.0) or abs(nu - 1.0) < 1e-8:
        raise ConfigError(key, f"must lie in (0, 1) U (1, 2], got {nu}")
    return nu


# }}}


def parse_config(doc: Any) -> RunConfig:
    """Validate a decoded JSON document; unknown keys are errors."""
    doc = _obj(doc, "", REQUIRED_KEYS + OPTIONAL_KEYS, REQUIRED_KEYS)
    dim = doc["dimension"]
    if dim not in (1, 2) or isinstance(dim, bool):
        raise ConfigError("dimension", f"must be 1 or 2, got {dim!r}")
    two = dim == 2
    axes = ("x", "y") if two else ("x",)

    domain = _obj(doc["domain"], "domain", axes, axes)
    x_range = _interval(domain["x"], "domain.x")
    y_range = _interval(domain["y"], "domain.y") if two else None

    T = _number(doc["T"], "T")
    if not T > 0:
        raise ConfigError("T", f"must be positive, got {T}")

    order_keys = ("gamma", "alpha", "beta") if two else ("gamma", "alpha")
    orders = _obj(doc["orders"], "orders", order_keys, order_keys)
    gamma = _number(orders["gamma"], "orders.gamma")
    if not (0.0 < gamma <= 1.0):
        raise ConfigError("orders.gamma", f"must lie in (0, 1], got {gamma}")
    alpha = _space_order(orders["alpha"], "orders.alpha")
    beta = _space_order(orders["beta"], "orders.beta") if two else None

    grid_keys = ("Nx", "Ny", "Nt") if two else ("Nx", "Nt")
    grid = _obj(doc["grid"], "grid", grid_keys, grid_keys)
    Nx = _count(grid["Nx"], "grid.Nx", 3)
    Ny = _count(grid["Ny"], "grid.Ny", 3) if two else None
    Nt = _count(grid["Nt"], "grid.Nt", 1)

    scheme = doc["scheme"]
    if scheme not in ("implicit", "explicit"):
        raise ConfigError("scheme", f"must be 'implicit' or 'explicit', got {scheme!r}")

    coef_keys = ("c", "d") if two else ("c",)
    coefs = _obj(doc["coefficients"], "coefficients", coef_keys, coef_keys)
    c = _expr(coefs["c"], "coefficients.c")
    d = _expr(coefs["d"], "coefficients.d") if two else None

    source = _expr(doc["source"], "source")
    initial = _expr(doc["initial"], "initial")

    b = doc["boundary"]
    if not two and isinstance(b, dict):
        b = _obj(b, "boundary", ("left", "right"), ("left", "right"))
        boundary = (_expr(b["left"], "boundary.left"), _expr(b["right"], "boundary.right"))
    else:
        boundary = _expr(b, "boundary")

    exact = _expr(doc["exact"], "exact") if doc.get("exact") is not None else None
    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output", "expected a path string")

    return RunConfig(
        dimension=dim, x_range=x_range, y_range=y_range, T=T, gamma=gamma,
        alpha=alpha, beta=beta, Nx=Nx, Ny=Ny, Nt=Nt, scheme=scheme, c=c, d=d,
        source=source, initial=initial, boundary=boundary, exact=exact,
        output=output,
    )


def load_config(path) -> RunConfig:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("<document>", f"invalid JSON: {exc}") from None
    return parse_config(doc)
