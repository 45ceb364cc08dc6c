"""Tridiagonal solves and one-step implicit integrators for the diffusion subflow.

The steppers advance the linear system

    dv/dt = L v + c(t) + q,     v(boundary) = b(t),

where ``L`` is the interior central-difference Laplacian, ``c(t)`` carries the
Dirichlet coupling ``b(t)/h^2`` into the first and last interior rows, and the
source ``q`` is frozen over the step. Only interior nodes are unknowns; the
returned field carries the exact boundary values at the new time.

Both steppers solve for the increment ``v - u`` rather than for ``v`` itself.
The two formulations agree algebraically, but the increment form returns the
input state bit-for-bit whenever the right-hand side vanishes, so discrete
steady states and constant states are exact fixed points in floating point.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from .errors import SingularSystemError
from .grid import Grid, as_field

__all__ = [
    "TridiagonalSystem",
    "thomas_solve",
    "DiffusionStepInput",
    "implicit_euler_diffusion_step",
    "crank_nicolson_diffusion_step",
    "trbdf2_diffusion_step",
]

# pivots below this fraction of the largest diagonal entry count as singular
PIVOT_RTOL = 1e-14

# TR-BDF2 coefficients (trapezoidal stage of width GAMMA*tau, then BDF2)
TRBDF2_GAMMA = 2.0 - np.sqrt(2.0)
_TRBDF2_A2 = (1.0 - TRBDF2_GAMMA) ** 2 / (TRBDF2_GAMMA * (2.0 - TRBDF2_GAMMA))
_TRBDF2_D = (1.0 - TRBDF2_GAMMA) / (2.0 - TRBDF2_GAMMA)


@dataclass(frozen=True)
class TridiagonalSystem:
    """Tridiagonal matrix stored as its three diagonals.

    ``diag`` has length m, ``lower`` and ``upper`` length m - 1. Systems
    assembled by the diffusion steppers are strictly diagonally dominant,
    which makes elimination without pivoting stable.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        diag = np.asarray(self.diag, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        m = diag.shape[0]
        if diag.ndim != 1 or m < 1:
            raise ValueError("diag must be a 1-D array of length >= 1")
        if lower.shape != (m - 1,) or upper.shape != (m - 1,):
            raise ValueError(
                f"off-diagonals must have length {m - 1}, "
                f"got lower {lower.shape}, upper {upper.shape}"
            )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "upper", upper)

    @property
    def m(self) -> int:
        return self.diag.shape[0]


@njit(cache=True)
def _thomas_kernel(lower, diag, upper, rhs, x, cp):  # pragma: no cover - jitted
    # Elimination without pivoting; returns -1 on success, else the row
    # whose pivot fell below PIVOT_RTOL * max |diag|.
    m = diag.shape[0]
    maxd = 0.0
    for i in range(m):
        a = abs(diag[i])
        if a > maxd:
            maxd = a
    tol = 1e-14 * maxd
    piv = diag[0]
    if abs(piv) < tol or piv == 0.0:
        return 0
    if m > 1:
        cp[0] = upper[0] / piv
    x[0] = rhs[0] / piv
    for i in range(1, m):
        piv = diag[i] - lower[i - 1] * cp[i - 1]
        if abs(piv) < tol or piv == 0.0:
            return i
        if i < m - 1:
            cp[i] = upper[i] / piv
        x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / piv
    for i in range(m - 2, -1, -1):
        x[i] = x[i] - cp[i] * x[i + 1]
    return -1


def thomas_solve(system: TridiagonalSystem, rhs) -> np.ndarray:
    """Solve ``system @ x = rhs`` by the Thomas algorithm.

    No pivoting is performed; callers are expected to supply diagonally
    dominant systems. A pivot smaller than ``PIVOT_RTOL`` times the largest
    diagonal entry raises SingularSystemError instead of continuing.
    """
    rhs = np.asarray(rhs, dtype=float)
    m = system.m
    if rhs.shape != (m,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({m},)")
    x = np.empty(m)
    cp = np.empty(m)
    bad = _thomas_kernel(system.lower, system.diag, system.upper, rhs, x, cp)
    if bad >= 0:
        raise SingularSystemError(f"near-zero pivot at row {bad}")
    return x


@dataclass(frozen=True)
class DiffusionStepInput:
    """One step of the diffusion subflow: state, frozen source, and boundary data.

    ``state`` and ``source`` are full boundary-inclusive fields on ``grid``;
    ``bc_left`` and ``bc_right`` map time to the Dirichlet values.
    """

    grid: Grid
    state: np.ndarray
    t: float
    tau: float
    source: np.ndarray
    bc_left: Callable[[float], float]
    bc_right: Callable[[float], float]

    def __post_init__(self):
        object.__setattr__(self, "state", as_field(self.grid, self.state))
        object.__setattr__(self, "source", as_field(self.grid, self.source))
        if not self.tau > 0.0:
            raise ValueError(f"step size must be positive, got tau={self.tau!r}")


def _theta_step(step: DiffusionStepInput, implicit_weight: float, bc_weight: float) -> np.ndarray:
    """Shared solve for the implicit one-step methods.

    Solves (I - a L) delta = tau * (L u + c(t) + q) + w * (c(t+tau) - c(t))
    for the interior increment delta, with a = implicit_weight and
    w = bc_weight, then injects the exact boundary values at t + tau.
    """
    g = step.grid
    u = step.state
    tau = step.tau
    inv_h2 = 1.0 / (g.h * g.h)

    t_new = step.t + tau
    bl0 = float(step.bc_left(step.t))
    br0 = float(step.bc_right(step.t))
    bl1 = float(step.bc_left(t_new))
    br1 = float(step.bc_right(t_new))

    # full-state stencil with the boundary entries pinned to b(t); the
    # state's own boundary values are never read by the solve
    work = u.copy()
    work[0] = bl0
    work[-1] = br0
    stencil = (work[:-2] - 2.0 * work[1:-1] + work[2:]) * inv_h2

    rhs = tau * (stencil + step.source[1:-1])
    rhs[0] += bc_weight * (bl1 - bl0) * inv_h2
    rhs[-1] += bc_weight * (br1 - br0) * inv_h2

    m = g.n - 2
    r = implicit_weight * inv_h2
    system = TridiagonalSystem(
        lower=np.full(m - 1, -r),
        diag=np.full(m, 1.0 + 2.0 * r),
        upper=np.full(m - 1, -r),
    )
    delta = thomas_solve(system, rhs)

    out = np.empty_like(u)
    out[1:-1] = u[1:-1] + delta
    out[0] = bl1
    out[-1] = br1
    return out


def implicit_euler_diffusion_step(step: DiffusionStepInput) -> np.ndarray:
    """One implicit-Euler step of the diffusion subflow.

    Interior nodes solve (I - tau L) v = u + tau q + tau c(t + tau); the
    boundary nodes of the result are set exactly to b(t + tau). First order
    in time, unconditionally stable.
    """
    return _theta_step(step, implicit_weight=step.tau, bc_weight=step.tau)


def crank_nicolson_diffusion_step(step: DiffusionStepInput) -> np.ndarray:
    """One Crank-Nicolson step of the diffusion subflow.

    Interior nodes solve
    (I - tau/2 L) v = (I + tau/2 L) u + tau q + tau/2 (c(t) + c(t + tau)),
    with the frozen source entering at full weight and the boundary coupling
    averaged trapezoidally. Second order in time, A-stable but without
    stiff damping: the amplification factor tends to -1 for the fastest
    grid modes, so high-frequency content survives the step.
    """
    half = 0.5 * step.tau
    return _theta_step(step, implicit_weight=half, bc_weight=half)


def trbdf2_diffusion_step(step: DiffusionStepInput) -> np.ndarray:
    """One TR-BDF2 step of the diffusion subflow.

    A trapezoidal stage over [t, t + gamma tau] with gamma = 2 - sqrt(2)
    followed by a BDF2 stage to t + tau. Second order like Crank-Nicolson,
    but L-stable: the fastest grid modes are damped rather than reflected,
    which downstream explicit corrections of gradient-dependent reaction
    terms require for stability. Costs two tridiagonal solves.
    """
    stage = DiffusionStepInput(
        grid=step.grid,
        state=step.state,
        t=step.t,
        tau=TRBDF2_GAMMA * step.tau,
        source=step.source,
        bc_left=step.bc_left,
        bc_right=step.bc_right,
    )
    vstar = crank_nicolson_diffusion_step(stage)

    g = step.grid
    inv_h2 = 1.0 / (g.h * g.h)
    t_new = step.t + step.tau
    bl1 = float(step.bc_left(t_new))
    br1 = float(step.bc_right(t_new))

    work = vstar.copy()
    work[0] = bl1
    work[-1] = br1
    stencil = (work[:-2] - 2.0 * work[1:-1] + work[2:]) * inv_h2

    d = _TRBDF2_D * step.tau
    rhs = _TRBDF2_A2 * (vstar[1:-1] - step.state[1:-1]) + d * (stencil + step.source[1:-1])

    m = g.n - 2
    r = d * inv_h2
    system = TridiagonalSystem(
        lower=np.full(m - 1, -r),
        diag=np.full(m, 1.0 + 2.0 * r),
        upper=np.full(m - 1, -r),
    )
    delta = thomas_solve(system, rhs)

    out = np.empty_like(step.state)
    out[1:-1] = vstar[1:-1] + delta
    out[0] = bl1
    out[-1] = br1
    return out
