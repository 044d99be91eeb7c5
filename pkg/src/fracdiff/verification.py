"""Grid-refinement studies on the manufactured benchmarks.

A study solves one benchmark on a sequence of grids, measures the maximum
nodal error at the final time and estimates pairwise observed orders
``log(e_{r-1}/e_r) / log(h_{r-1}/h_r)``.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from fracdiff import baselines
from fracdiff.problem import benchmark_1d, benchmark_2d, max_error
from fracdiff.solver1d import StabilityWarning, solve_explicit_1d, solve_implicit_1d
from fracdiff.solver2d import solve_explicit_2d, solve_implicit_2d
from fracdiff.stability import explicit_bound_1d, explicit_bound_2d

__all__ = [
    "ConvergenceReport",
    "LevelResult",
    "ERROR_RTOL",
    "RATE_ATOL",
    "emit",
    "observed_rate",
    "render_markdown",
    "reproduce_table",
    "run_refinement",
    "time_steps",
]

log = logging.getLogger(__name__)

T_FINAL = 0.5
COUPLINGS = ("tau-eq-dx", "tau-eq-dx-pow", "fixed-tau", "stable-ratio")
SCHEMES = ("implicit", "explicit")
PROBLEMS = ("bench1d", "bench2d")

#: Reference comparison tolerances.
ERROR_RTOL = 0.02
RATE_ATOL = 0.05

CSV_COLUMNS = ("N", "dx", "tau", "max_error", "rate", "paper_error", "rel_diff")


def observed_rate(e_coarse: float, e_fine: float, h_coarse: float, h_fine: float) -> float:
    return math.log(e_coarse / e_fine) / math.log(h_coarse / h_fine)


@dataclass
class LevelResult:
    N: int
    dx: float
    dy: Optional[float]
    tau: float
    Nt: int
    t_final: float
    max_error: Optional[float]
    rate: Optional[float] = None
    paper_error: Optional[float] = None
    paper_rate: Optional[float] = None
    error: Optional[str] = None

    @property
    def rel_diff(self) -> Optional[float]:
        if self.paper_error is None or self.max_error is None:
            return None
        return abs(self.max_error - self.paper_error) / self.paper_error


@dataclass
class ConvergenceReport:
    problem: str
    scheme: str
    coupling: str
    alpha: float
    gamma: float
    beta: Optional[float] = None
    rows: list[LevelResult] = field(default_factory=list)
    #: spacing the rates are measured against: "dx" or "tau"
    rate_against: str = "dx"
    error_rtol: float = ERROR_RTOL
    rate_atol: float = RATE_ATOL

    @property
    def label(self) -> str:
        parts = [f"alpha={self.alpha:g}"]
        if self.beta is not None:
            parts.append(f"beta={self.beta:g}")
        parts.append(f"gamma={self.gamma:g}")
        return ", ".join(parts)

    @property
    def errors(self) -> list[Optional[float]]:
        return [r.max_error for r in self.rows]

    @property
    def rates(self) -> list[Optional[float]]:
        return [r.rate for r in self.rows]

    def compute_rates(self) -> None:
        for prev, cur in zip(self.rows, self.rows[1:]):
            cur.rate = None
            if prev.max_error and cur.max_error:
                h0, h1 = ((prev.dx, cur.dx) if self.rate_against == "dx"
                          else (prev.tau, cur.tau))
                cur.rate = observed_rate(prev.max_error, cur.max_error, h0, h1)
        if self.rows:
            self.rows[0].rate = None

    def gate_failures(self) -> list[str]:
        """Cells whose error or rate misses the reference beyond tolerance."""
        out = []
        for r in self.rows:
            if r.paper_error is None:
                continue
            if r.max_error is None:
                out.append(f"{self.label} N={r.N}: level failed ({r.error})")
                continue
            if r.rel_diff > self.error_rtol:
                out.append(f"{self.label} N={r.N}: error {r.max_error:.4e} vs "
                           f"{r.paper_error:.4e} (rel diff {r.rel_diff:.3%})")
            if r.paper_rate is not None:
                if r.rate is None or abs(r.rate - r.paper_rate) > self.rate_atol:
                    out.append(f"{self.label} N={r.N}: rate {r.rate} vs {r.paper_rate}")
        return out


# {{{ running


def time_steps(coupling: str, dx: float, gamma: float, T: float = T_FINAL,
               tau: Optional[float] = None) -> tuple[int, float, float]:
    """Step count, step size and reached final time for a coupling rule.

    The target step is kept as is and the run continues until ``t >= T``, so
    the reached time ``Nt * tau`` may overshoot *T* slightly when *T* is not a
    multiple of the step; errors are then measured at the reached time.  When
    *T* is a multiple (up to rounding), the step is snapped to ``T / Nt``.
    """
    if coupling == "tau-eq-dx":
        target = dx
    elif coupling == "tau-eq-dx-pow":
        target = dx ** (2.0 / (2.0 - gamma))
    elif coupling == "fixed-tau":
        if tau is None or not tau > 0:
            raise ValueError("fixed-tau coupling needs a positive tau")
        target = tau
    else:
        raise ValueError(f"unknown coupling {coupling!r}")
    ratio = T / target
    Nt = max(1, round(ratio))
    if abs(ratio - Nt) <= 1e-9 * max(1.0, ratio):
        return Nt, T / Nt, T
    Nt = max(1, math.ceil(ratio))
    return Nt, target, Nt * target


def _stable_steps(problem: str, alpha, beta, gamma, N: int, theta: float) -> int:
    """Smallest step count with ``actual <= theta * bound``."""
    if problem == "bench1d":
        rep = explicit_bound_1d(benchmark_1d(alpha, gamma, N=N, Nt=1))
        lhs_per_tau = 1.0 / (1.0 / N) ** alpha
    else:
        rep = explicit_bound_2d(benchmark_2d(alpha, beta, gamma, N=N, Nt=1))
        lhs_per_tau = N**alpha + N**beta
    if math.isinf(rep.bound):
        return 1
    tau = (theta * rep.bound / lhs_per_tau) ** (1.0 / gamma)
    return max(1, math.ceil(T_FINAL / tau - 1e-9))


def _solve_level(task: tuple) -> tuple[Optional[float], Optional[str]]:
    problem, scheme, alpha, beta, gamma, N, Nt, T = task
    try:
        if problem == "bench1d":
            spec = benchmark_1d(alpha, gamma, N=N, Nt=Nt, T=T)
            solver = solve_implicit_1d if scheme == "implicit" else solve_explicit_1d
        else:
            spec = benchmark_2d(alpha, beta, gamma, N=N, Nt=Nt, T=T)
            solver = solve_implicit_2d if scheme == "implicit" else solve_explicit_2d
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", StabilityWarning)
            res = solver(spec)
        return max_error(res.final, spec.exact, spec.time.T, spec.grid), None
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def default_jobs() -> int:
    env = os.environ.get("FRACDIFF_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_tasks(tasks: list[tuple], jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [_solve_level(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(_solve_level, tasks))


def run_refinement(problem: str, alpha: float, gamma: float, levels: Sequence[int],
                   coupling: str = "tau-eq-dx", scheme: str = "implicit",
                   beta: Optional[float] = None, tau: Optional[float] = None,
                   theta: float = 0.9, jobs: int = 1) -> ConvergenceReport:
    """Solve a benchmark on every level in *levels* and collect errors and rates.

    Couplings: ``tau-eq-dx`` (tau = dx), ``tau-eq-dx-pow``
    (tau = dx^(2/(2-gamma))), ``fixed-tau`` and ``stable-ratio``, the last
    one holding the explicit stability ratio at ``theta`` times its bound;
    its rates are measured against tau.  A level that fails is recorded with
    its error message and does not abort the study.
    """
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    if coupling not in COUPLINGS:
        raise ValueError(f"unknown coupling {coupling!r}")
    if problem == "bench2d" and beta is None:
        raise ValueError("bench2d needs beta")
    levels = list(levels)
    if any(n < 4 for n in levels) or any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError(f"levels must be strictly increasing and >= 4, got {levels}")

    report = ConvergenceReport(
        problem=problem, scheme=scheme, coupling=coupling, alpha=alpha,
        gamma=gamma, beta=beta if problem == "bench2d" else None,
        rate_against="tau" if coupling == "stable-ratio" else "dx",
    )
    tasks = []
    for N in levels:
        dx = 1.0 / N
        if coupling == "stable-ratio":
            Nt = _stable_steps(problem, alpha, beta, gamma, N, theta)
            step, t_end = T_FINAL / Nt, T_FINAL
        else:
            Nt, step, t_end = time_steps(coupling, dx, gamma, tau=tau)
        tasks.append((problem, scheme, alpha, beta, gamma, N, Nt, t_end))
        report.rows.append(LevelResult(
            N=N, dx=dx, dy=dx if problem == "bench2d" else None,
            tau=step, Nt=Nt, t_final=t_end, max_error=None))

    for row, (err, msg) in zip(report.rows, _run_tasks(tasks, jobs)):
        row.max_error = err
        row.error = msg
        if msg:
            log.warning("level N=%d failed: %s", row.N, msg)
    report.compute_rates()
    return report


def _attach(report: ConvergenceReport, ref: dict) -> ConvergenceReport:
    for row in report.rows:
        if row.N in ref:
            row.paper_error, row.paper_rate = ref[row.N]
    return report


def table_configs(table: int) -> list[dict]:
    """Keyword arguments of :func:`run_refinement` for each column of a table."""
    if table == 1:
        return [dict(problem="bench1d", alpha=a, gamma=g, levels=sorted(ref),
                     coupling="tau-eq-dx", reference=ref)
                for (a, g), ref in baselines.TABLE1.items()]
    if table == 2:
        g = baselines.TABLE2_GAMMA
        return [dict(problem="bench1d", alpha=a, gamma=g, levels=sorted(ref),
                     coupling="tau-eq-dx-pow", reference=ref)
                for a, ref in baselines.TABLE2.items()]
    if table == 3:
        return [dict(problem="bench2d", alpha=a, beta=b, gamma=g,
                     levels=sorted(ref), coupling="tau-eq-dx", reference=ref)
                for (g, a, b), ref in baselines.TABLE3.items()]
    raise ValueError(f"no reference table {table!r}; expected 1, 2 or 3")


def reproduce_table(table: int, jobs: int = 1) -> list[ConvergenceReport]:
    reports = []
    for cfg in table_configs(table):
        ref = cfg.pop("reference")
        reports.append(_attach(run_refinement(scheme="implicit", jobs=jobs, **cfg), ref))
    return reports


# }}}


# {{{ output


def _fmt(v, spec: str) -> str:
    return "" if v is None else format(v, spec)


def csv_text(report: ConvergenceReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.rows:
        w.writerow([
            r.N, _fmt(r.dx, ".5g"), _fmt(r.tau, ".5g"), _fmt(r.max_error, ".4e"),
            _fmt(r.rate, ".5g"), _fmt(r.paper_error, ".4e"), _fmt(r.rel_diff, ".5g"),
        ])
    return buf.getvalue()


def render_markdown(reports: Sequence[ConvergenceReport]) -> str:
    """Side-by-side error/rate columns, one pair per configuration.

    When reference values are attached, each cell shows
    ``computed (reference)``.
    """
    if not reports:
        return ""
    spacing = "tau, dx, dy" if reports[0].problem == "bench2d" else "tau, dx"
    if reports[0].coupling == "tau-eq-dx-pow":
        spacing = "dx"
    head = [spacing]
    for rep in reports:
        head += [rep.label, "Rate"]
    lines = ["| " + " | ".join(head) + " |",
             "|" + "---|" * len(head)]
    levels = [r.N for r in reports[0].rows]
    for i, N in enumerate(levels):
        cells = [f"1/{N}"]
        for rep in reports:
            row = rep.rows[i] if i < len(rep.rows) else None
            if row is None or row.max_error is None:
                cells += ["failed", ""]
                continue
            err = f"{row.max_error:.4e}"
            rate = _fmt(row.rate, ".4f")
            if row.paper_error is not None:
                err += f" ({row.paper_error:.4e})"
            if row.paper_rate is not None:
                rate += f" ({row.paper_rate:.4f})"
            cells += [err, rate]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def emit(report: ConvergenceReport, fmt: str, destination) -> None:
    if fmt == "csv":
        text = csv_text(report)
    elif fmt == "markdown":
        text = render_markdown([report])
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(destination, "w", newline="") as fh:
        fh.write(text)


# }}}
