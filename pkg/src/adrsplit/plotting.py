"""File-based matplotlib rendering of convergence reports and solution profiles."""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .harness import ConvergenceReport

__all__ = ["save_convergence_figure", "save_solution_figure"]

_STYLE = {
    "classical_lie": dict(color="tab:blue", marker="o"),
    "corrected_first_order": dict(color="tab:orange", marker="s"),
    "classical_strang": dict(color="tab:green", marker="^"),
    "predictor_corrector": dict(color="tab:red", marker="d"),
    "rk4_reference": dict(color="tab:purple", marker="x"),
}


def save_convergence_figure(report: ConvergenceReport, path, title: str | None = None) -> None:
    """Render a log-log error-versus-step-size figure to ``path``.

    Failed cells are omitted. Dashed guide lines of slopes 1 and 2 are
    anchored to the first method's data for visual order reading.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    anchor = None
    for sweep in report.methods:
        taus = [t for t, e in zip(sweep.taus, sweep.errors) if math.isfinite(e) and e > 0]
        errs = [e for e in sweep.errors if math.isfinite(e) and e > 0]
        if not taus:
            continue
        style = _STYLE.get(sweep.method, dict(marker="."))
        label = sweep.method
        if sweep.fitted_slope is not None:
            label += f" (slope {sweep.fitted_slope:.2f})"
        ax.loglog(taus, errs, linestyle="-", label=label, **style)
        if anchor is None:
            anchor = (taus[0], errs[0])
    if anchor is not None:
        t0, e0 = anchor
        ts = np.array([min(s for sweep in report.methods for s in sweep.taus),
                       max(s for sweep in report.methods for s in sweep.taus)])
        ax.loglog(ts, e0 * (ts / t0), color="0.6", linestyle="--", linewidth=0.9, label="slope 1")
        ax.loglog(ts, e0 * (ts / t0) ** 2, color="0.3", linestyle=":", linewidth=0.9, label="slope 2")
    ax.set_xlabel("time step")
    ax.set_ylabel(f"discrete H2 error at t = {report.t_final:g}")
    ax.set_title(title or f"{report.problem} (n = {report.grid_points})")
    ax.grid(True, which="both", linestyle=":", linewidth=0.5)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_solution_figure(x, u, path, title: str | None = None) -> None:
    """Render a solution profile u(x) to ``path``."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(np.asarray(x), np.asarray(u), color="tab:blue")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    if title:
        ax.set_title(title)
    ax.grid(True, linestyle=":", linewidth=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
