"""Independent oracles used by the test suite.

Everything here is deliberately written from scratch (no calls into the
package under test and no library solvers), so each oracle provides a second
route to the quantities the tests check.
"""

import numpy as np


def dense_solve(a, b):
    """Solve a dense linear system by Gaussian elimination with partial pivoting."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = b.size
    assert a.shape == (n, n)
    aug = np.hstack([a, b[:, None]])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[piv, col]) == 0.0:
            raise ZeroDivisionError("singular matrix in oracle")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        for row in range(col + 1, n):
            factor = aug[row, col] / aug[col, col]
            aug[row, col:] -= factor * aug[col, col:]
    x = np.zeros(n)
    for row in range(n - 1, -1, -1):
        x[row] = (aug[row, -1] - aug[row, row + 1:n] @ x[row + 1:]) / aug[row, row]
    return x


def tridiag_to_dense(lower, diag, upper):
    """Assemble the dense matrix of a tridiagonal system."""
    m = len(diag)
    a = np.zeros((m, m))
    for i in range(m):
        a[i, i] = diag[i]
        if i > 0:
            a[i, i - 1] = lower[i - 1]
        if i < m - 1:
            a[i, i + 1] = upper[i]
    return a


def random_dd_system(rng, m):
    """Random strictly diagonally dominant tridiagonal system (lower, diag, upper, rhs)."""
    lower = rng.uniform(-1.0, 1.0, size=m - 1)
    upper = rng.uniform(-1.0, 1.0, size=m - 1)
    diag = np.empty(m)
    for i in range(m):
        off = (abs(lower[i - 1]) if i > 0 else 0.0) + (abs(upper[i]) if i < m - 1 else 0.0)
        diag[i] = (off + rng.uniform(0.5, 2.0)) * (1.0 if rng.random() < 0.5 else -1.0)
    rhs = rng.uniform(-5.0, 5.0, size=m)
    return lower, diag, upper, rhs


def heat_exact(x, t):
    """Solution of u_t = u_xx on (0,1), u(0)=u(1)=0, u0 = sin(pi x)."""
    return np.exp(-np.pi**2 * t) * np.sin(np.pi * x)


def lsq_slope(xs, ys):
    """Least-squares slope of ys against xs via the normal equations."""
    xs = [float(v) for v in xs]
    ys = [float(v) for v in ys]
    n = len(xs)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(v * v for v in xs)
    sxy = sum(u * v for u, v in zip(xs, ys))
    return (n * sxy - sx * sy) / (n * sxx - sx * sx)
