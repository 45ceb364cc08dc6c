"""Uniform 1-D grids, finite-difference operators, and discrete Sobolev norms.

Fields are plain 1-D float arrays holding one nodal value per grid point,
boundary nodes included. All operators and norms in this module are pure
functions; spacing and node coordinates live on the immutable `Grid`.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "Grid",
    "make_grid",
    "apply_laplacian",
    "apply_gradient",
    "norm_l2",
    "norm_h1",
    "norm_h2",
]


@dataclass(frozen=True)
class Grid:
    """Uniform mesh of ``n`` nodes on the closed interval [x0, x1].

    Node ``i`` sits at ``x0 + i*h`` with ``h = (x1 - x0)/(n - 1)``; nodes 0
    and ``n - 1`` are the boundary nodes.
    """

    n: int
    x0: float
    x1: float

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"grid needs at least 3 nodes, got n={self.n}")
        if not self.x0 < self.x1:
            raise ValueError(f"empty interval: x0={self.x0!r} must be < x1={self.x1!r}")

    @property
    def h(self) -> float:
        return (self.x1 - self.x0) / (self.n - 1)

    @cached_property
    def x(self) -> np.ndarray:
        """Node coordinates, read-only."""
        x = np.linspace(self.x0, self.x1, self.n)
        x.flags.writeable = False
        return x


def make_grid(n: int, x0: float, x1: float) -> Grid:
    """Build a uniform grid of ``n`` nodes spanning [x0, x1].

    Raises ValueError for ``n < 3`` or a non-increasing interval.
    """
    return Grid(int(n), float(x0), float(x1))


def as_field(g: Grid, u) -> np.ndarray:
    """Validate that ``u`` is a nodal field on ``g`` and return it as float array."""
    u = np.asarray(u, dtype=float)
    if u.shape != (g.n,):
        raise ValueError(f"field has shape {u.shape}, expected ({g.n},) on this grid")
    return u


def apply_laplacian(g: Grid, u) -> np.ndarray:
    """Discrete second derivative of ``u`` on ``g``.

    Interior nodes use the central three-point stencil, which is exact on
    cubics. The boundary nodes carry second-order one-sided four-point
    stencils; they feed only the norm computations, never the time steppers.
    On the minimal grid (n = 3) the boundary stencil falls back to the
    three-point second difference, which is only first-order there.
    """
    u = as_field(g, u)
    inv_h2 = 1.0 / (g.h * g.h)
    out = np.empty_like(u)
    out[1:-1] = (u[:-2] - 2.0 * u[1:-1] + u[2:]) * inv_h2
    if g.n >= 4:
        out[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) * inv_h2
        out[-1] = (2.0 * u[-1] - 5.0 * u[-2] + 4.0 * u[-3] - u[-4]) * inv_h2
    else:
        out[0] = (u[0] - 2.0 * u[1] + u[2]) * inv_h2
        out[-1] = out[0]
    return out


def apply_gradient(g: Grid, u) -> np.ndarray:
    """Discrete first derivative of ``u`` on ``g``.

    Central two-point stencil at interior nodes, second-order one-sided
    three-point stencils at the two boundary nodes; every node is therefore
    second-order accurate and linears differentiate exactly.
    """
    u = as_field(g, u)
    inv_2h = 1.0 / (2.0 * g.h)
    out = np.empty_like(u)
    out[1:-1] = (u[2:] - u[:-2]) * inv_2h
    out[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv_2h
    out[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) * inv_2h
    return out


def _weighted_sq(g: Grid, u: np.ndarray) -> float:
    # trapezoidal quadrature: half weight at the two boundary nodes
    s = np.dot(u, u) - 0.5 * (u[0] * u[0] + u[-1] * u[-1])
    return s * (g.x1 - g.x0) / (g.n - 1)


def norm_l2(g: Grid, u) -> float:
    """Trapezoidal-weighted discrete L2 norm, boundary nodes included."""
    u = as_field(g, u)
    return float(np.sqrt(_weighted_sq(g, u)))


def norm_h1(g: Grid, u) -> float:
    """Discrete H1 norm: L2 norms of the field and its discrete gradient."""
    u = as_field(g, u)
    return float(np.sqrt(_weighted_sq(g, u) + _weighted_sq(g, apply_gradient(g, u))))


def norm_h2(g: Grid, u) -> float:
    """Discrete H2 norm: H1 norm plus the L2 norm of the discrete Laplacian."""
    u = as_field(g, u)
    s = (
        _weighted_sq(g, u)
        + _weighted_sq(g, apply_gradient(g, u))
        + _weighted_sq(g, apply_laplacian(g, u))
    )
    return float(np.sqrt(s))
