"""Command-line entry point.

Subcommands: ``solve``, ``convergence``, ``reproduce``, ``stability`` and
``dump-coefficients``.  Every failure prints one line starting with
``error: <category>:``.  Exit codes: 1 for config/parse errors, 2 for solver
failures, 3 when ``reproduce --gate`` finds a mismatch.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from fracdiff.coefficients import caputo_weights, left_rl_matrix, right_rl_matrix, riesz_matrix
from fracdiff.config import ConfigError, load_config
from fracdiff.expression import ExpressionError
from fracdiff.linalg import SingularMatrixError
from fracdiff.problem import ProblemSpec2D, max_error
from fracdiff.solver1d import NonFiniteFieldError, StabilityWarning

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_GATE = 3


class CLIError(Exception):
    def __init__(self, category: str, message: str, code: int):
        self.category = category
        self.code = code
        super().__init__(message)


def _fail(category: str, message: str, code: int):
    raise CLIError(category, message, code)


def _load(path: str):
    try:
        return load_config(path)
    except OSError as exc:
        _fail("io", f"{path}: {exc.strerror or exc}", EXIT_CONFIG)
    except ConfigError as exc:
        _fail("config", str(exc), EXIT_CONFIG)


def _to_problem(cfg):
    try:
        return cfg.to_problem()
    except (ValueError, ArithmeticError) as exc:
        _fail("config", str(exc), EXIT_CONFIG)


# {{{ solve


def cmd_solve(args) -> int:
    cfg = _load(args.config)
    spec = _to_problem(cfg)
    two = isinstance(spec, ProblemSpec2D)

    from fracdiff import solver1d, solver2d

    if cfg.scheme == "implicit":
        solver = solver2d.solve_implicit_2d if two else solver1d.solve_implicit_1d
    else:
        solver = solver2d.solve_explicit_2d if two else solver1d.solve_explicit_1d

    keep = args.dump_history is not None
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", StabilityWarning)
            result = solver(spec, keep_history=keep)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except NonFiniteFieldError as exc:
        _fail("solver", f"non-finite solution at step {exc.step}", EXIT_SOLVER)
    except SingularMatrixError as exc:
        _fail("solver", f"singular system: {exc}", EXIT_SOLVER)
    except (ExpressionError, ValueError, ArithmeticError) as exc:
        _fail("solver", str(exc), EXIT_SOLVER)

    output = args.output or cfg.output
    text = result.final.csv_text(spec.grid)
    if output:
        try:
            Path(output).write_text(text)
        except OSError as exc:
            _fail("io", f"{output}: {exc.strerror or exc}", EXIT_CONFIG)
    else:
        sys.stdout.write(text)

    if keep:
        out_dir = Path(args.dump_history)
        out_dir.mkdir(parents=True, exist_ok=True)
        for k, fld in enumerate(result.fields):
            (out_dir / f"u_{k:05d}.csv").write_text(fld.csv_text(spec.grid))

    if spec.exact is not None:
        err = max_error(result.final, spec.exact, spec.time.T, spec.grid)
        print(f"max_error: {err:.6e}", file=sys.stderr if not output else sys.stdout)
    return EXIT_OK


# }}}


# {{{ convergence / reproduce


def _jobs(args) -> int:
    from fracdiff.verification import default_jobs

    return args.jobs if args.jobs is not None else default_jobs()


def cmd_convergence(args) -> int:
    from fracdiff.verification import emit, render_markdown, run_refinement

    try:
        levels = [int(v) for v in args.levels.split(",") if v.strip()]
    except ValueError:
        _fail("config", f"--levels: not a comma-separated list of integers: {args.levels!r}",
              EXIT_CONFIG)
    if args.problem == "bench2d" and args.beta is None:
        _fail("config", "--beta is required for bench2d", EXIT_CONFIG)
    try:
        report = run_refinement(
            args.problem, args.alpha, args.gamma, levels, coupling=args.coupling,
            scheme=args.scheme, beta=args.beta, tau=args.tau, theta=args.theta,
            jobs=_jobs(args))
    except ValueError as exc:
        _fail("config", str(exc), EXIT_CONFIG)

    sys.stdout.write(render_markdown([report]))
    if args.out:
        fmt = "markdown" if args.out.endswith(".md") else "csv"
        try:
            emit(report, fmt, args.out)
        except OSError as exc:
            _fail("io", f"{args.out}: {exc.strerror or exc}", EXIT_CONFIG)
    failed = [r for r in report.rows if r.error]
    if failed:
        for r in failed:
            print(f"error: solver: level N={r.N}: {r.error}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from fracdiff.verification import emit, render_markdown, reproduce_table

    reports = reproduce_table(args.table, jobs=_jobs(args))
    md = render_markdown(reports)
    sys.stdout.write(f"table {args.table}: computed (reference)\n\n{md}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"table{args.table}.md").write_text(md)
        for rep in reports:
            tag = rep.label.replace(", ", "_").replace("=", "")
            emit(rep, "csv", out / f"table{args.table}_{tag}.csv")

    failures = [f for rep in reports for f in rep.gate_failures()]
    for f in failures:
        print(f"mismatch: {f}", file=sys.stderr)
    if failures and args.gate:
        _fail("gate", f"{len(failures)} cell(s) outside tolerance", EXIT_GATE)
    return EXIT_OK


# }}}


def cmd_stability(args) -> int:
    from fracdiff.stability import StabilityReport, explicit_bound_1d, explicit_bound_2d

    spec = _to_problem(_load(args.config))
    try:
        if isinstance(spec, ProblemSpec2D):
            report = explicit_bound_2d(spec)
        else:
            report = explicit_bound_1d(spec)
    except ValueError as exc:
        _fail("config", str(exc), EXIT_CONFIG)
    print(report.render())
    print()
    print(StabilityReport.CSV_HEADER)
    print(report.csv_row())
    return EXIT_OK


def cmd_dump(args) -> int:
    try:
        if args.what == "caputo":
            w = caputo_weights(args.nu, args.n).weights
            lines = ["s,l"] + [f"{s},{v!r}" for s, v in enumerate(w.tolist())]
            sys.stdout.write("\n".join(lines) + "\n")
            return EXIT_OK
        build = {"g": riesz_matrix, "p": left_rl_matrix, "q": right_rl_matrix}[args.what]
        M = np.asarray(build(args.nu, args.n))
    except (ValueError, IndexError) as exc:
        _fail("config", str(exc), EXIT_CONFIG)
    for row in M:
        print(",".join(repr(float(v)) for v in row))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fracdiff",
        description="Finite-difference solvers for Caputo-Riesz fractional diffusion.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a problem described by a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--output")
    s.add_argument("--dump-history", metavar="DIR",
                   help="write one CSV per time level into DIR")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("convergence", help="grid-refinement study on a benchmark")
    c.add_argument("--problem", choices=("bench1d", "bench2d"), required=True)
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--beta", type=float)
    c.add_argument("--gamma", type=float, required=True)
    c.add_argument("--levels", required=True, help="comma-separated cell counts")
    c.add_argument("--coupling", default="tau-eq-dx",
                   choices=("tau-eq-dx", "tau-eq-dx-pow", "fixed-tau", "stable-ratio"))
    c.add_argument("--tau", type=float, help="step for --coupling fixed-tau")
    c.add_argument("--theta", type=float, default=0.9,
                   help="fraction of the stability bound for --coupling stable-ratio")
    c.add_argument("--scheme", choices=("implicit", "explicit"), default="implicit")
    c.add_argument("--out", help="CSV file (Markdown if it ends in .md)")
    c.add_argument("--jobs", type=int)
    c.set_defaults(func=cmd_convergence)

    r = sub.add_parser("reproduce", help="reproduce a reference table")
    r.add_argument("--table", type=int, choices=(1, 2, 3), required=True)
    r.add_argument("--out", help="directory for Markdown and CSV output")
    r.add_argument("--gate", action="store_true",
                   help="exit with status 3 if any cell is outside tolerance")
    r.add_argument("--jobs", type=int)
    r.set_defaults(func=cmd_reproduce)

    st = sub.add_parser("stability", help="explicit-scheme stability report")
    st.add_argument("--config", required=True)
    st.set_defaults(func=cmd_stability)

    d = sub.add_parser("dump-coefficients", help="print a coefficient table as CSV")
    d.add_argument("--nu", type=float, required=True,
                   help="space order (time order for --what caputo)")
    d.add_argument("--n", type=int, required=True,
                   help="cell count (step count for --what caputo)")
    d.add_argument("--what", choices=("g", "p", "q", "caputo"), default="g")
    d.set_defaults(func=cmd_dump)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
