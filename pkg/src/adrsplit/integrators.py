"""Time steppers for the semilinear advection-diffusion-reaction problem.

Five methods share the signature ``step(g, prob, u, t, tau) -> field``:

* ``corrected_first_order``: freeze the nonlinearity at the current state,
  move it into the diffusion equation as a source, and take one implicit
  Euler step with the exact boundary data. The modified reaction equation
  is stationary at the frozen state, so it is skipped entirely.
* ``predictor_corrector``: same frozen source, but the diffusion solve is
  a second-order L-stable one-step method (TR-BDF2, the predictor); a
  single forward-Euler step of width tau/2 on the corrected reaction
  equation then upgrades the result to second order. Boundary values stay
  exact at every step. The predictor must damp the fastest grid modes:
  with a merely A-stable solve such as Crank-Nicolson, the explicit
  corrector amplifies mid-frequency noise through the gradient argument
  of the nonlinearity and the iteration blows up on gradient-dependent
  problems.
* ``classical_lie``: implicit-Euler diffusion step followed by a full
  forward-Euler reaction step at all nodes. The reaction substep evolves
  boundary nodes freely, which is what triggers order reduction for
  inhomogeneous Dirichlet data.
* ``classical_strang``: Crank-Nicolson diffusion half-step, Heun reaction
  step of full width, second diffusion half-step. Formally second order,
  degraded by the same boundary mismatch.
* ``rk4_reference``: the classical fourth-order Runge-Kutta method applied
  to the full method-of-lines system on the same grid, with boundary nodes
  held at their exact values at every stage time. Used as the reference
  solution for error measurement; requires tau <= h^2/4.

Explicit treatment of the gradient-dependent reaction term imposes an
advective step-size restriction tau <~ 2h/max|df/dp| on every method with
an explicit substep (all but ``corrected_first_order``); see the README
for the measured limits on the built-in problems.

Integration runs in compiled per-method loops when the problem's
nonlinearity and boundary functions are compiled dispatchers (all built-in
problems); the per-step functions below are the reference path, used for
problems built from plain Python callables and reproduced bit-for-bit by
the compiled loops.
"""

from dataclasses import dataclass

import numpy as np
from numba.extending import is_jitted

from ._kernels import METHOD_KERNELS, rk4_kernel
from .errors import NonFiniteStateError, StabilityViolationError
from .grid import Grid, as_field
from .linalg import (
    DiffusionStepInput,
    crank_nicolson_diffusion_step,
    implicit_euler_diffusion_step,
    trbdf2_diffusion_step,
)
from .problems import Problem, evaluate_nonlinearity

__all__ = [
    "METHOD_IDS",
    "IntegrationResult",
    "step_corrected_first_order",
    "step_predictor_corrector",
    "step_classical_lie",
    "step_classical_strang",
    "rk4_reference_solve",
    "rk4_segment",
    "sample_initial",
    "integrate",
]

METHOD_IDS = (
    "corrected_first_order",
    "predictor_corrector",
    "classical_lie",
    "classical_strang",
    "rk4_reference",
)

METHOD_SUMMARIES = {
    "corrected_first_order": "frozen-source diffusion solve, implicit Euler (order 1)",
    "predictor_corrector": "L-stable TR-BDF2 predictor + half-width Euler corrector (order 2)",
    "classical_lie": "implicit Euler diffusion then forward Euler reaction (order reduced)",
    "classical_strang": "CN half-step / Heun reaction / CN half-step (order reduced)",
    "rk4_reference": "classical RK4 on the method-of-lines system (reference)",
}


@dataclass(frozen=True)
class IntegrationResult:
    final_state: np.ndarray
    steps_taken: int
    t_final_reached: float


def _diffusion_input(g, prob, u, t, tau, source):
    return DiffusionStepInput(
        grid=g, state=u, t=t, tau=tau, source=source,
        bc_left=prob.bc.left, bc_right=prob.bc.right,
    )


def step_corrected_first_order(g: Grid, prob: Problem, u_n, t_n: float, tau: float) -> np.ndarray:
    """Advance by one step of the corrected first-order scheme."""
    q = evaluate_nonlinearity(g, prob, u_n)
    return implicit_euler_diffusion_step(_diffusion_input(g, prob, u_n, t_n, tau, q))


def step_predictor_corrector(g: Grid, prob: Problem, u_n, t_n: float, tau: float) -> np.ndarray:
    """Advance by one step of the second-order predictor-corrector scheme."""
    q = evaluate_nonlinearity(g, prob, u_n)
    v = trbdf2_diffusion_step(_diffusion_input(g, prob, u_n, t_n, tau, q))
    fv = evaluate_nonlinearity(g, prob, v)
    out = v.copy()
    out[1:-1] += 0.5 * tau * (fv[1:-1] - q[1:-1])
    out[0] = float(prob.bc.left(t_n + tau))
    out[-1] = float(prob.bc.right(t_n + tau))
    if not np.isfinite(out[1:-1]).all():
        i = int(np.argmax(~np.isfinite(out)))
        raise NonFiniteStateError(f"corrector produced non-finite value at node {i}")
    return out


def step_classical_lie(g: Grid, prob: Problem, u_n, t_n: float, tau: float) -> np.ndarray:
    """Advance by one step of classical Lie splitting (diffusion, then reaction).

    The forward-Euler reaction substep acts on every node; boundary nodes are
    not re-imposed here, only by the next diffusion substep.
    """
    zero = np.zeros(g.n)
    v = implicit_euler_diffusion_step(_diffusion_input(g, prob, u_n, t_n, tau, zero))
    fv = evaluate_nonlinearity(g, prob, v)
    return v + tau * fv


def step_classical_strang(g: Grid, prob: Problem, u_n, t_n: float, tau: float) -> np.ndarray:
    """Advance by one step of classical Strang splitting.

    Diffusion half-steps use Crank-Nicolson with boundary data at the physical
    times of each half-interval; the reaction step is Heun's method of full
    width applied at every node.
    """
    half = 0.5 * tau
    zero = np.zeros(g.n)
    v = crank_nicolson_diffusion_step(_diffusion_input(g, prob, u_n, t_n, half, zero))
    f0 = evaluate_nonlinearity(g, prob, v)
    w1 = v + tau * f0
    f1 = evaluate_nonlinearity(g, prob, w1)
    w = v + 0.5 * tau * (f0 + f1)
    return crank_nicolson_diffusion_step(_diffusion_input(g, prob, w, t_n + half, half, zero))


_STEP_FUNCS = {
    "corrected_first_order": step_corrected_first_order,
    "predictor_corrector": step_predictor_corrector,
    "classical_lie": step_classical_lie,
    "classical_strang": step_classical_strang,
}


def _rk4_numpy(u0, t0, dt, n_steps, inv_h2, inv_2h, f, b1, b2):
    # same arithmetic as _kernels.rk4_kernel, for plain Python callables
    u = u0.copy()

    def rhs(state, ts):
        state[0] = b1(ts)
        state[-1] = b2(ts)
        lap = (state[:-2] - 2.0 * state[1:-1] + state[2:]) * inv_h2
        grad = (state[2:] - state[:-2]) * inv_2h
        k = np.empty_like(state)
        k[0] = k[-1] = 0.0
        k[1:-1] = lap + f(state[1:-1], grad)
        return k

    for step in range(n_steps):
        t = t0 + step * dt
        th = t + 0.5 * dt
        t1 = t + dt
        k1 = rhs(u, t)
        us = u + 0.5 * dt * k1
        k2 = rhs(us, th)
        us = u + 0.5 * dt * k2
        k3 = rhs(us, th)
        us = u + dt * k3
        k4 = rhs(us, t1)
        u[1:-1] = u[1:-1] + dt / 6.0 * (k1[1:-1] + 2.0 * k2[1:-1] + 2.0 * k3[1:-1] + k4[1:-1])
        if not np.isfinite(u[1:-1]).all():
            return u, step
        u[0] = b1(t1)
        u[-1] = b2(t1)
    return u, -1


def _problem_is_compiled(prob: Problem) -> bool:
    return all(is_jitted(fn) for fn in (prob.nonlinearity.fn, prob.bc.left, prob.bc.right))


def rk4_segment(g: Grid, prob: Problem, u0, t0: float, duration: float, n_steps: int) -> np.ndarray:
    """Integrate the method-of-lines system with classical RK4 over one interval.

    Advances ``n_steps`` equal steps from ``t0`` to ``t0 + duration`` starting
    at state ``u0``. The step size must satisfy the explicit diffusion
    stability bound tau <= h^2/4, otherwise StabilityViolationError is raised
    before any work is done.
    """
    u0 = as_field(g, u0)
    n_steps = int(n_steps)
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    if not duration > 0.0:
        raise ValueError(f"duration must be positive, got {duration!r}")
    dt = duration / n_steps
    h = g.h
    limit = 0.25 * h * h
    if dt > limit * (1.0 + 1e-12):
        raise StabilityViolationError(
            f"rk4 step {dt:.6e} exceeds the stability bound h^2/4 = {limit:.6e}; "
            f"need at least {int(np.ceil(duration / limit))} steps"
        )
    inv_h2 = 1.0 / (h * h)
    inv_2h = 1.0 / (2.0 * h)
    fns = (prob.nonlinearity.fn, prob.bc.left, prob.bc.right)
    runner = rk4_kernel if _problem_is_compiled(prob) else _rk4_numpy
    u, bad = runner(u0, float(t0), dt, n_steps, inv_h2, inv_2h, *fns)
    if bad >= 0:
        raise NonFiniteStateError(f"non-finite state after rk4 step {bad}")
    return u


def rk4_reference_solve(g: Grid, prob: Problem, n_steps: int) -> np.ndarray:
    """Reference solution at t_final via classical RK4 from the initial data."""
    return rk4_segment(g, prob, sample_initial(g, prob), 0.0, prob.t_final, n_steps)


def sample_initial(g: Grid, prob: Problem) -> np.ndarray:
    """Sample the initial profile on the grid, boundary nodes set to b(0)."""
    u0 = np.asarray(prob.initial(g.x), dtype=float)
    u0 = np.broadcast_to(u0, (g.n,)).copy()
    u0[0] = float(prob.bc.left(0.0))
    u0[-1] = float(prob.bc.right(0.0))
    return u0


def integrate(g: Grid, prob: Problem, method: str, tau: float,
              compiled: bool | None = None) -> IntegrationResult:
    """Integrate the problem from 0 to t_final with constant step tau.

    ``tau`` must tile the interval: t_final/tau has to be an integer to one
    part in 1e8. For ``rk4_reference`` the steps are RK4 steps and the
    stability guard of `rk4_segment` applies.

    ``compiled`` selects the integration path: None (default) uses the
    compiled loop when the problem's callables are compiled dispatchers,
    True requires it, False forces the per-step reference path. Both paths
    produce identical results.
    """
    if method not in METHOD_IDS:
        raise KeyError(f"unknown method {method!r}; valid ids: {', '.join(METHOD_IDS)}")
    if not tau > 0.0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    ratio = prob.t_final / tau
    n_steps = int(round(ratio))
    if n_steps < 1 or abs(ratio - n_steps) > 1e-8:
        raise ValueError(
            f"tau={tau!r} does not tile [0, {prob.t_final}]: t_final/tau = {ratio!r}"
        )
    use_kernel = method in METHOD_KERNELS and compiled is not False and _problem_is_compiled(prob)
    if compiled is True and method != "rk4_reference" and not use_kernel:
        raise ValueError("compiled integration needs jitted problem callables")
    if method == "rk4_reference":
        u = rk4_reference_solve(g, prob, n_steps)
    elif use_kernel:
        u0 = sample_initial(g, prob)
        inv_h2 = 1.0 / (g.h * g.h)
        inv_2h = 1.0 / (2.0 * g.h)
        u, bad = METHOD_KERNELS[method](
            u0, 0.0, tau, n_steps, inv_h2, inv_2h,
            prob.nonlinearity.fn, prob.bc.left, prob.bc.right,
        )
        if bad >= 0:
            raise NonFiniteStateError(f"non-finite state after step {bad}")
    else:
        step = _STEP_FUNCS[method]
        u = sample_initial(g, prob)
        for j in range(n_steps):
            u = step(g, prob, u, j * tau, tau)
    if not np.isfinite(u).all():
        i = int(np.argmax(~np.isfinite(u)))
        raise NonFiniteStateError(f"final state non-finite at node {i}")
    return IntegrationResult(final_state=u, steps_taken=n_steps, t_final_reached=n_steps * tau)
