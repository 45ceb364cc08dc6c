"""Command-line front end: single runs, convergence sweeps, and the registry.

Exit codes: 0 success, 1 usage error, 2 numerical failure (non-finite state,
stability violation, untrusted reference). Every output file starts with
``#``-prefixed provenance lines echoing the resolved configuration, so any
result can be reproduced from its own header.
"""

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .errors import NonFiniteStateError, StabilityViolationError
from .grid import make_grid
from .harness import (
    DEFAULT_K_RANGE,
    SweepSpec,
    default_tau_list,
    run_sweep,
    write_report,
)
from .integrators import METHOD_IDS, METHOD_SUMMARIES, integrate
from .problems import available_problems, make_example, problem_summary

__all__ = ["main"]

DEFAULT_GRID_POINTS = 500
DEFAULT_RUN_K = 15


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        raise _UsageError(message)


def _parse_k_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k range {text!r}, expected 'a..b' or 'a'")
    if lo > hi or lo < 0:
        raise argparse.ArgumentTypeError(f"bad k range {text!r}: need 0 <= a <= b")
    return lo, hi


def _parse_methods(text: str) -> tuple[str, ...]:
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    if not methods:
        raise argparse.ArgumentTypeError("empty method list")
    for m in methods:
        if m not in METHOD_IDS:
            raise argparse.ArgumentTypeError(
                f"unknown method {m!r}; valid: {', '.join(METHOD_IDS)}"
            )
    return methods


def _parse_taus(text: str) -> tuple[float, ...]:
    try:
        taus = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tau list {text!r}")
    if any(t <= 0 for t in taus):
        raise argparse.ArgumentTypeError("tau values must be positive")
    return taus


def _problem_type(text: str) -> str:
    if text not in available_problems():
        raise argparse.ArgumentTypeError(
            f"unknown problem {text!r}; valid: {', '.join(available_problems())}"
        )
    return text


def _build_parser() -> _Parser:
    parser = _Parser(prog="adrsplit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate one problem once and write the final field")
    run.add_argument("--problem", required=True, type=_problem_type)
    run.add_argument("--method", default="predictor_corrector", choices=METHOD_IDS)
    group = run.add_mutually_exclusive_group()
    group.add_argument("--tau", type=float, help="step size (must tile [0, t_final])")
    group.add_argument("--k", type=int, help=f"step size t_final/2^k (default {DEFAULT_RUN_K})")
    run.add_argument("--n", type=int, default=DEFAULT_GRID_POINTS, help="grid points")
    run.add_argument("--t-final", type=float, default=None, help="override the problem horizon")
    run.add_argument("--out", default="-", help="output csv path, '-' for stdout")
    run.add_argument("--plot", nargs="?", const="", default=None, metavar="PNG",
                     help="also render the profile (default: output path with .png)")

    conv = sub.add_parser("convergence", help="run a step-size sweep and write the report")
    conv.add_argument("--problem", required=True, type=_problem_type)
    conv.add_argument("--methods", type=_parse_methods,
                      default=tuple(m for m in METHOD_IDS if m != "rk4_reference"),
                      help="comma-separated method ids")
    group = conv.add_mutually_exclusive_group()
    group.add_argument("--k", type=_parse_k_range, default=DEFAULT_K_RANGE, metavar="A..B",
                       help="tau = t_final/2^k for k in A..B (default 13..18)")
    group.add_argument("--taus", type=_parse_taus, help="explicit comma-separated tau list")
    conv.add_argument("--n", type=int, default=DEFAULT_GRID_POINTS, help="grid points")
    conv.add_argument("--t-final", type=float, default=None, help="override the problem horizon")
    conv.add_argument("--ref-steps", type=int, default=None,
                      help="RK4 reference steps (default: smallest 2^j with step <= h^2/8)")
    conv.add_argument("--out", required=True, help="report path")
    conv.add_argument("--format", choices=("csv", "dat"), default=None,
                      help="report format (default: from --out extension, else csv)")
    conv.add_argument("--plot", nargs="?", const="", default=None, metavar="PNG",
                      help="also render the log-log figure (default: output path with .png)")

    sub.add_parser("list", help="list problems and methods")
    return parser


def _plot_path(plot_arg: str, out: str, fallback: str) -> Path:
    if plot_arg:
        return Path(plot_arg)
    base = Path(out) if out != "-" else Path(fallback)
    return base.with_suffix(".png")


def _cmd_run(args) -> int:
    prob = make_example(args.problem)
    if args.t_final is not None:
        prob = dataclasses.replace(prob, t_final=args.t_final)
    if args.n < 3:
        raise _UsageError(f"--n must be >= 3, got {args.n}")
    tau = args.tau if args.tau is not None else prob.t_final / 2 ** (
        args.k if args.k is not None else DEFAULT_RUN_K
    )
    g = make_grid(args.n, *prob.domain)
    try:
        result = integrate(g, prob, args.method, tau)
    except (StabilityViolationError, NonFiniteStateError) as exc:
        print(f"adrsplit run: numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        raise _UsageError(str(exc))

    provenance = [
        "adrsplit run",
        f"problem: {args.problem}",
        f"method: {args.method}",
        f"tau: {tau!r}",
        f"grid_points: {args.n}",
        f"t_final: {prob.t_final!r}",
        f"steps: {result.steps_taken}",
    ]
    lines = [f"# {p}" for p in provenance]
    lines.append("x,u")
    for xv, uv in zip(g.x, result.final_state):
        lines.append(f"{float(xv)!r},{float(uv)!r}")
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    if args.plot is not None:
        from .plotting import save_solution_figure

        path = _plot_path(args.plot, args.out, f"{args.problem}_{args.method}")
        save_solution_figure(
            g.x, result.final_state, path,
            title=f"{args.problem} / {args.method} at t = {prob.t_final:g}",
        )
    return 0


def _cmd_convergence(args) -> int:
    if args.out == "-":
        raise _UsageError("convergence requires a file path for --out")
    prob = make_example(args.problem)
    t_final = args.t_final if args.t_final is not None else prob.t_final
    if args.taus is not None:
        taus = tuple(sorted(args.taus, reverse=True))
        tau_label = ",".join(repr(t) for t in taus)
    else:
        lo, hi = args.k
        taus = default_tau_list(t_final, lo, hi)
        tau_label = f"k={lo}..{hi}"
    fmt = args.format or ("dat" if str(args.out).endswith(".dat") else "csv")
    try:
        spec = SweepSpec(
            problem=args.problem,
            methods=args.methods,
            tau_list=taus,
            grid_points=args.n,
            ref_steps=args.ref_steps,
            t_final=args.t_final,
        )
    except ValueError as exc:
        raise _UsageError(str(exc))
    try:
        report = run_sweep(spec)
    except (StabilityViolationError, NonFiniteStateError) as exc:
        print(f"adrsplit convergence: numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        raise _UsageError(str(exc))

    provenance = [
        "adrsplit convergence report",
        f"problem: {args.problem}",
        f"methods: {','.join(args.methods)}",
        f"steps: {tau_label}",
        f"taus: {','.join(repr(t) for t in taus)}",
        f"grid_points: {args.n}",
        f"t_final: {report.t_final!r}",
        f"ref_steps: {report.ref_steps}",
        f"ref_certificate_h2: {report.ref_certificate!r}",
        f"ref_trusted: {str(report.trusted).lower()}",
        f"format: {fmt}",
    ]
    for sweep in report.methods:
        slope = repr(sweep.fitted_slope) if sweep.fitted_slope is not None else "undefined"
        provenance.append(f"fitted_slope[{sweep.method}]: {slope}")
    write_report(report, args.out, fmt, provenance=provenance)
    if args.plot is not None:
        from .plotting import save_convergence_figure

        save_convergence_figure(report, _plot_path(args.plot, args.out, args.problem))

    failed = sum(
        1 for sweep in report.methods for e in sweep.errors if not np.isfinite(e)
    )
    if failed:
        print(f"adrsplit convergence: {failed} failed cell(s) recorded as nan",
              file=sys.stderr)
    if not report.trusted:
        print(
            "adrsplit convergence: reference self-refinement delta "
            f"{report.ref_certificate!r} exceeds {1e-8!r}; report untrusted",
            file=sys.stderr,
        )
        return 2
    return 0


def _cmd_list() -> int:
    print("problems:")
    for pid in available_problems():
        print(f"  {pid:<10} {problem_summary(pid)}")
    print("methods:")
    for mid in METHOD_IDS:
        print(f"  {mid:<24} {METHOD_SUMMARIES[mid]}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "convergence":
            return _cmd_convergence(args)
        return _cmd_list()
    except _UsageError as exc:
        print(f"usage: adrsplit [run|convergence|list] ...", file=sys.stderr)
        print(f"adrsplit: error: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        print(f"adrsplit: error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
