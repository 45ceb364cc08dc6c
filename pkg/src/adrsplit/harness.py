"""Convergence experiments: error measurement, step-size sweeps, and reports.

A sweep integrates one problem with several methods over a descending list of
step sizes, measures the final-time error against an RK4 reference on the same
grid (so spatial error cancels and the observed order is purely temporal), and
records pairwise observed orders plus a least-squares slope per method. The
reference certifies itself by comparing against a twice-refined run.
"""

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteStateError, StabilityViolationError, UndefinedOrderError
from .grid import Grid, make_grid, norm_h2
from .integrators import METHOD_IDS, integrate, rk4_reference_solve
from .problems import make_example

__all__ = [
    "SweepSpec",
    "MethodSweep",
    "ConvergenceReport",
    "REF_CERTIFICATE_TOL",
    "compute_error",
    "default_tau_list",
    "run_sweep",
    "fit_order",
    "write_report",
]

# a reference whose self-refinement delta exceeds this is marked untrusted
REF_CERTIFICATE_TOL = 1e-8

# default step-size exponents: tau = t_final / 2^k; the range sits below the
# advective step-size limit of the explicit reaction substeps on the built-in
# problems at the default grid (see README)
DEFAULT_K_RANGE = (13, 18)


def compute_error(g: Grid, u_num, u_ref) -> float:
    """Discrete H2 norm of the difference between two fields on one grid."""
    u_num = np.asarray(u_num, dtype=float)
    u_ref = np.asarray(u_ref, dtype=float)
    return norm_h2(g, u_num - u_ref)


def default_tau_list(t_final: float, k_min: int = DEFAULT_K_RANGE[0],
                     k_max: int = DEFAULT_K_RANGE[1]) -> tuple[float, ...]:
    """Step sizes t_final / 2^k for k in [k_min, k_max], descending."""
    if k_min > k_max:
        raise ValueError(f"empty k range {k_min}..{k_max}")
    return tuple(t_final / 2**k for k in range(k_min, k_max + 1))


@dataclass(frozen=True)
class SweepSpec:
    """Configuration of one convergence sweep.

    ``ref_steps`` of None selects the smallest power of two whose RK4 step
    stays below h^2/8. ``t_final`` of None uses the problem's own horizon.
    """

    problem: str
    methods: tuple[str, ...]
    tau_list: tuple[float, ...]
    grid_points: int = 500
    ref_steps: int | None = None
    t_final: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "tau_list", tuple(float(t) for t in self.tau_list))
        if not self.methods:
            raise ValueError("methods list is empty")
        for m in self.methods:
            if m not in METHOD_IDS:
                raise ValueError(f"unknown method {m!r}; valid ids: {', '.join(METHOD_IDS)}")
        if not self.tau_list:
            raise ValueError("tau_list is empty")
        if any(t <= 0.0 for t in self.tau_list):
            raise ValueError("tau_list entries must be positive")
        if any(a <= b for a, b in zip(self.tau_list, self.tau_list[1:])):
            raise ValueError("tau_list must be strictly decreasing")
        if self.grid_points < 3:
            raise ValueError(f"grid_points must be >= 3, got {self.grid_points}")
        if self.ref_steps is not None and self.ref_steps < 1:
            raise ValueError(f"ref_steps must be >= 1, got {self.ref_steps}")


@dataclass(frozen=True)
class MethodSweep:
    """Errors of one method across the sweep's step sizes.

    ``errors`` holds NaN for failed cells (blow-up or stability violation);
    ``pairwise_orders`` holds None where either neighbor failed, and
    ``fitted_slope`` is None when fewer than two cells survived.
    """

    method: str
    taus: tuple[float, ...]
    errors: tuple[float, ...]
    pairwise_orders: tuple[float | None, ...]
    fitted_slope: float | None


@dataclass(frozen=True)
class ConvergenceReport:
    problem: str
    grid_points: int
    t_final: float
    ref_steps: int
    ref_certificate: float
    trusted: bool
    methods: tuple[MethodSweep, ...]


def _auto_ref_steps(g: Grid, t_final: float) -> int:
    target = g.h * g.h / 8.0
    n = 1
    while t_final / n > target:
        n *= 2
    return n


def fit_order(pairs) -> float:
    """Least-squares slope of log error against log step size.

    Entries with non-finite or non-positive error are excluded; fewer than
    two surviving points raise UndefinedOrderError.
    """
    pts = [(float(t), float(e)) for t, e in pairs if math.isfinite(e) and e > 0.0]
    if len(pts) < 2:
        raise UndefinedOrderError(
            f"need at least 2 positive errors to fit an order, have {len(pts)}"
        )
    lt = np.log([t for t, _ in pts])
    le = np.log([e for _, e in pts])
    return float(np.polyfit(lt, le, 1)[0])


def _pairwise_orders(taus, errors):
    orders: list[float | None] = [None]
    for i in range(1, len(taus)):
        e0, e1 = errors[i - 1], errors[i]
        if math.isfinite(e0) and math.isfinite(e1) and e0 > 0.0 and e1 > 0.0:
            orders.append(math.log(e0 / e1) / math.log(taus[i - 1] / taus[i]))
        else:
            orders.append(None)
    return tuple(orders)


def run_sweep(spec: SweepSpec) -> ConvergenceReport:
    """Execute a convergence sweep and return its report.

    One reference per problem; every (method, tau) cell integrates to the
    final time and records the H2 error against it. Cells that blow up or
    violate the RK4 stability guard are recorded as NaN and excluded from
    the fits; they do not abort the sweep.
    """
    prob = make_example(spec.problem)
    if spec.t_final is not None:
        prob = dataclasses.replace(prob, t_final=float(spec.t_final))
    for tau in spec.tau_list:
        ratio = prob.t_final / tau
        if abs(ratio - round(ratio)) > 1e-8:
            raise ValueError(f"tau={tau!r} does not tile [0, {prob.t_final}]")

    g = make_grid(spec.grid_points, *prob.domain)
    ref_steps = spec.ref_steps if spec.ref_steps is not None else _auto_ref_steps(g, prob.t_final)
    ref = rk4_reference_solve(g, prob, ref_steps)
    ref_fine = rk4_reference_solve(g, prob, 2 * ref_steps)
    certificate = compute_error(g, ref, ref_fine)
    trusted = certificate <= REF_CERTIFICATE_TOL

    sweeps = []
    for method in spec.methods:
        errors = []
        for tau in spec.tau_list:
            try:
                result = integrate(g, prob, method, tau)
                errors.append(compute_error(g, result.final_state, ref))
            except (NonFiniteStateError, StabilityViolationError):
                errors.append(float("nan"))
        try:
            slope = fit_order(zip(spec.tau_list, errors))
        except UndefinedOrderError:
            slope = None
        sweeps.append(
            MethodSweep(
                method=method,
                taus=spec.tau_list,
                errors=tuple(errors),
                pairwise_orders=_pairwise_orders(spec.tau_list, errors),
                fitted_slope=slope,
            )
        )
    return ConvergenceReport(
        problem=spec.problem,
        grid_points=spec.grid_points,
        t_final=prob.t_final,
        ref_steps=ref_steps,
        ref_certificate=certificate,
        trusted=trusted,
        methods=tuple(sweeps),
    )


def _fmt(value: float) -> str:
    # shortest round-trip decimal
    return repr(float(value))


def write_report(report: ConvergenceReport, path, fmt: str = "csv", provenance=()) -> None:
    """Write a report as CSV or as a plot-ready whitespace ``.dat`` file.

    CSV columns are ``problem,method,tau,error_h2,observed_order`` with the
    observed order blank on each method's first row and around failed cells.
    The dat format emits one two-column block (tau, error) per method,
    separated by two blank lines so plotting tools see separate datasets;
    failed cells are omitted there. Optional provenance lines are prepended
    as ``#`` comments in either format. Output is deterministic: identical
    reports produce identical bytes.
    """
    if fmt not in ("csv", "dat"):
        raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'dat'")
    lines = [f"# {p}" for p in provenance]
    if fmt == "csv":
        lines.append("problem,method,tau,error_h2,observed_order")
        for sweep in report.methods:
            for tau, err, order in zip(sweep.taus, sweep.errors, sweep.pairwise_orders):
                order_s = _fmt(order) if order is not None else ""
                lines.append(f"{report.problem},{sweep.method},{_fmt(tau)},{_fmt(err)},{order_s}")
    else:
        blocks = []
        for sweep in report.methods:
            rows = [f"# method: {sweep.method}"]
            for tau, err in zip(sweep.taus, sweep.errors):
                if math.isfinite(err):
                    rows.append(f"{_fmt(tau)} {_fmt(err)}")
            blocks.append("\n".join(rows))
        lines.append("\n\n\n".join(blocks))
    text = "\n".join(lines) + "\n"
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path!r}: {exc}") from exc
