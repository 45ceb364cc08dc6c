"""Compiled whole-integration loops for the built-in problems.

Each kernel replays the corresponding per-step function from `integrators`
with identical floating-point operation order, so both paths produce the
same bits; the per-step functions remain the reference implementations and
the parity is asserted in the test suite. Kernels take the nonlinearity and
boundary functions as compiled dispatchers and are specialized per problem
on first use (dispatcher arguments cannot be disk-cached).

All kernels return ``(state, bad_step)`` where ``bad_step`` is -1 on success
or the index of the step after which the state stopped being finite.
"""

import numpy as np
from numba import njit

from .linalg import _thomas_kernel, TRBDF2_GAMMA, _TRBDF2_A2, _TRBDF2_D

_FMAX = 1.7976931348623157e308


@njit
def _finite(v):  # pragma: no cover - jitted
    return v == v and -_FMAX <= v <= _FMAX


@njit
def _gradient_full(u, inv_2h, p):  # pragma: no cover - jitted
    n = u.shape[0]
    for i in range(1, n - 1):
        p[i] = (u[i + 1] - u[i - 1]) * inv_2h
    p[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv_2h
    p[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv_2h


@njit
def _theta_solve(u, q, t, tau, iw, bw, inv_h2, b1, b2,
                 lower, diag, upper, rhs, x, cp, out):  # pragma: no cover - jitted
    # mirrors linalg._theta_step; returns 0 on success, 1 on singular pivot
    n = u.shape[0]
    m = n - 2
    t_new = t + tau
    bl0 = b1(t)
    br0 = b2(t)
    bl1 = b1(t_new)
    br1 = b2(t_new)
    for i in range(1, n - 1):
        left = u[i - 1] if i > 1 else bl0
        right = u[i + 1] if i < n - 2 else br0
        s = (left - 2.0 * u[i] + right) * inv_h2
        rhs[i - 1] = tau * (s + q[i])
    rhs[0] += bw * (bl1 - bl0) * inv_h2
    rhs[m - 1] += bw * (br1 - br0) * inv_h2
    r = iw * inv_h2
    dval = 1.0 + 2.0 * r
    for i in range(m):
        diag[i] = dval
    for i in range(m - 1):
        lower[i] = -r
        upper[i] = -r
    if _thomas_kernel(lower, diag, upper, rhs, x, cp) >= 0:
        return 1
    for i in range(1, n - 1):
        out[i] = u[i] + x[i - 1]
    out[0] = bl1
    out[n - 1] = br1
    return 0


@njit
def corrected_first_order_kernel(u0, t0, tau, n_steps, inv_h2, inv_2h,
                                 f, b1, b2):  # pragma: no cover - jitted
    n = u0.shape[0]
    m = n - 2
    u = u0.copy()
    p = np.empty(n)
    q = np.empty(n)
    v = np.empty(n)
    lower = np.empty(m - 1)
    diag = np.empty(m)
    upper = np.empty(m - 1)
    rhs = np.empty(m)
    x = np.empty(m)
    cp = np.empty(m)
    for step in range(n_steps):
        t = t0 + step * tau
        _gradient_full(u, inv_2h, p)
        for i in range(n):
            q[i] = f(u[i], p[i])
        if _theta_solve(u, q, t, tau, tau, tau, inv_h2, b1, b2,
                        lower, diag, upper, rhs, x, cp, v) != 0:
            return u, step
        for i in range(n):
            u[i] = v[i]
        for i in range(1, n - 1):
            if not _finite(u[i]):
                return u, step
    return u, -1


@njit
def predictor_corrector_kernel(u0, t0, tau, n_steps, inv_h2, inv_2h,
                               f, b1, b2):  # pragma: no cover - jitted
    n = u0.shape[0]
    m = n - 2
    u = u0.copy()
    p = np.empty(n)
    q = np.empty(n)
    fv = np.empty(n)
    vstar = np.empty(n)
    v = np.empty(n)
    lower = np.empty(m - 1)
    diag = np.empty(m)
    upper = np.empty(m - 1)
    rhs = np.empty(m)
    x = np.empty(m)
    cp = np.empty(m)
    gtau = TRBDF2_GAMMA * tau
    d = _TRBDF2_D * tau
    for step in range(n_steps):
        t = t0 + step * tau
        _gradient_full(u, inv_2h, p)
        for i in range(n):
            q[i] = f(u[i], p[i])
        # predictor stage 1: trapezoidal over [t, t + gamma tau]
        if _theta_solve(u, q, t, gtau, 0.5 * gtau, 0.5 * gtau, inv_h2, b1, b2,
                        lower, diag, upper, rhs, x, cp, vstar) != 0:
            return u, step
        # predictor stage 2: BDF2 to t + tau
        t1 = t + tau
        bl1 = b1(t1)
        br1 = b2(t1)
        for i in range(1, n - 1):
            left = vstar[i - 1] if i > 1 else bl1
            right = vstar[i + 1] if i < n - 2 else br1
            s = (left - 2.0 * vstar[i] + right) * inv_h2
            rhs[i - 1] = _TRBDF2_A2 * (vstar[i] - u[i]) + d * (s + q[i])
        r = d * inv_h2
        dval = 1.0 + 2.0 * r
        for i in range(m):
            diag[i] = dval
        for i in range(m - 1):
            lower[i] = -r
            upper[i] = -r
        if _thomas_kernel(lower, diag, upper, rhs, x, cp) >= 0:
            return u, step
        for i in range(1, n - 1):
            v[i] = vstar[i] + x[i - 1]
        v[0] = bl1
        v[n - 1] = br1
        # corrector: forward Euler of width tau/2 on the corrected reaction
        _gradient_full(v, inv_2h, p)
        for i in range(n):
            fv[i] = f(v[i], p[i])
        for i in range(1, n - 1):
            u[i] = v[i] + 0.5 * tau * (fv[i] - q[i])
        u[0] = bl1
        u[n - 1] = br1
        for i in range(1, n - 1):
            if not _finite(u[i]):
                return u, step
    return u, -1


@njit
def classical_lie_kernel(u0, t0, tau, n_steps, inv_h2, inv_2h,
                         f, b1, b2):  # pragma: no cover - jitted
    n = u0.shape[0]
    m = n - 2
    u = u0.copy()
    p = np.empty(n)
    q0 = np.zeros(n)
    fv = np.empty(n)
    v = np.empty(n)
    lower = np.empty(m - 1)
    diag = np.empty(m)
    upper = np.empty(m - 1)
    rhs = np.empty(m)
    x = np.empty(m)
    cp = np.empty(m)
    for step in range(n_steps):
        t = t0 + step * tau
        if _theta_solve(u, q0, t, tau, tau, tau, inv_h2, b1, b2,
                        lower, diag, upper, rhs, x, cp, v) != 0:
            return u, step
        _gradient_full(v, inv_2h, p)
        for i in range(n):
            fv[i] = f(v[i], p[i])
        # reaction substep acts on every node; boundaries evolve freely
        for i in range(n):
            u[i] = v[i] + tau * fv[i]
        for i in range(n):
            if not _finite(u[i]):
                return u, step
    return u, -1


@njit
def classical_strang_kernel(u0, t0, tau, n_steps, inv_h2, inv_2h,
                            f, b1, b2):  # pragma: no cover - jitted
    n = u0.shape[0]
    m = n - 2
    u = u0.copy()
    p = np.empty(n)
    q0 = np.zeros(n)
    f0 = np.empty(n)
    f1 = np.empty(n)
    v = np.empty(n)
    w1 = np.empty(n)
    w = np.empty(n)
    lower = np.empty(m - 1)
    diag = np.empty(m)
    upper = np.empty(m - 1)
    rhs = np.empty(m)
    x = np.empty(m)
    cp = np.empty(m)
    half = 0.5 * tau
    for step in range(n_steps):
        t = t0 + step * tau
        if _theta_solve(u, q0, t, half, 0.5 * half, 0.5 * half, inv_h2, b1, b2,
                        lower, diag, upper, rhs, x, cp, v) != 0:
            return u, step
        # Heun reaction step of full width at every node
        _gradient_full(v, inv_2h, p)
        for i in range(n):
            f0[i] = f(v[i], p[i])
        for i in range(n):
            w1[i] = v[i] + tau * f0[i]
        _gradient_full(w1, inv_2h, p)
        for i in range(n):
            f1[i] = f(w1[i], p[i])
        for i in range(n):
            w[i] = v[i] + 0.5 * tau * (f0[i] + f1[i])
        if _theta_solve(w, q0, t + half, half, 0.5 * half, 0.5 * half, inv_h2, b1, b2,
                        lower, diag, upper, rhs, x, cp, u) != 0:
            return u, step
        for i in range(n):
            if not _finite(u[i]):
                return u, step
    return u, -1


@njit
def rk4_kernel(u0, t0, dt, n_steps, inv_h2, inv_2h, f, b1, b2):  # pragma: no cover - jitted
    n = u0.shape[0]
    u = u0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    us = np.empty(n)
    for step in range(n_steps):
        t = t0 + step * dt
        th = t + 0.5 * dt
        t1 = t + dt
        u[0] = b1(t)
        u[n - 1] = b2(t)
        for i in range(1, n - 1):
            lap = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_h2
            grad = (u[i + 1] - u[i - 1]) * inv_2h
            k1[i] = lap + f(u[i], grad)
        for i in range(1, n - 1):
            us[i] = u[i] + 0.5 * dt * k1[i]
        us[0] = b1(th)
        us[n - 1] = b2(th)
        for i in range(1, n - 1):
            lap = (us[i - 1] - 2.0 * us[i] + us[i + 1]) * inv_h2
            grad = (us[i + 1] - us[i - 1]) * inv_2h
            k2[i] = lap + f(us[i], grad)
        for i in range(1, n - 1):
            us[i] = u[i] + 0.5 * dt * k2[i]
        us[0] = b1(th)
        us[n - 1] = b2(th)
        for i in range(1, n - 1):
            lap = (us[i - 1] - 2.0 * us[i] + us[i + 1]) * inv_h2
            grad = (us[i + 1] - us[i - 1]) * inv_2h
            k3[i] = lap + f(us[i], grad)
        for i in range(1, n - 1):
            us[i] = u[i] + dt * k3[i]
        us[0] = b1(t1)
        us[n - 1] = b2(t1)
        for i in range(1, n - 1):
            lap = (us[i - 1] - 2.0 * us[i] + us[i + 1]) * inv_h2
            grad = (us[i + 1] - us[i - 1]) * inv_2h
            k4[i] = lap + f(us[i], grad)
        for i in range(1, n - 1):
            vnew = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if not _finite(vnew):
                return u, step
            u[i] = vnew
        u[0] = b1(t1)
        u[n - 1] = b2(t1)
    return u, -1


METHOD_KERNELS = {
    "corrected_first_order": corrected_first_order_kernel,
    "predictor_corrector": predictor_corrector_kernel,
    "classical_lie": classical_lie_kernel,
    "classical_strang": classical_strang_kernel,
}
