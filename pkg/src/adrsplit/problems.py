"""Problem definitions: nonlinearity, boundary data, initial profile, horizon.

The built-in registry covers four nonlinear benchmark problems (ex1..ex4), a
boundary-compatible variant of the fourth (ex4c), and two linear sanity
problems (heat, constant). All live on the unit interval with t_final = 0.5.

Nonlinearities map ``(u, du/dx)`` pointwise and must accept both scalars and
arrays (plain arithmetic broadcasts either way). The built-ins are compiled
scalar kernels so the explicit reference integrator can call them from jitted
code; user-supplied plain Python callables work everywhere else.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from .errors import NonFiniteStateError
from .grid import Grid, apply_gradient, as_field

__all__ = [
    "Nonlinearity",
    "BoundarySpec",
    "Problem",
    "make_example",
    "available_problems",
    "problem_summary",
    "evaluate_nonlinearity",
]

# tolerance for the informational initial/boundary compatibility flags
COMPAT_ATOL = 1e-12


def _initial_at(initial: Callable, xv: float) -> float:
    out = np.asarray(initial(np.array([xv])), dtype=float)
    return float(out.reshape(-1)[0])


@dataclass(frozen=True)
class Nonlinearity:
    """Pointwise reaction/advection term ``fn(u, p)`` with ``p = du/dx``."""

    fn: Callable
    label: str


@dataclass(frozen=True)
class BoundarySpec:
    """Dirichlet data: ``left`` and ``right`` map time to boundary values."""

    left: Callable[[float], float]
    right: Callable[[float], float]


@dataclass(frozen=True)
class Problem:
    """A complete initial boundary value problem on an interval.

    ``compatible`` records whether the initial data matches the boundary
    data at t = 0 on each end (to COMPAT_ATOL). The flag is informational;
    incompatible data is accepted and the boundary value simply overrides
    the endpoint node when integration starts.
    """

    id: str
    nonlinearity: Nonlinearity
    bc: BoundarySpec
    initial: Callable
    t_final: float
    domain: tuple[float, float] = (0.0, 1.0)
    compatible: tuple[bool, bool] = (True, True)

    def __post_init__(self):
        if not self.t_final > 0.0:
            raise ValueError(f"t_final must be positive, got {self.t_final!r}")
        x0, x1 = self.domain
        if not x0 < x1:
            raise ValueError(f"domain {self.domain!r} is not an interval")
        u0_left = _initial_at(self.initial, x0)
        u0_right = _initial_at(self.initial, x1)
        flags = (
            abs(u0_left - float(self.bc.left(0.0))) <= COMPAT_ATOL,
            abs(u0_right - float(self.bc.right(0.0))) <= COMPAT_ATOL,
        )
        object.__setattr__(self, "compatible", flags)


def evaluate_nonlinearity(g: Grid, prob: Problem, u) -> np.ndarray:
    """Evaluate ``f(u, du/dx)`` at every node, boundary nodes included.

    The gradient is the grid's second-order discrete derivative. A non-finite
    value at any node raises NonFiniteStateError naming the node.
    """
    u = as_field(g, u)
    p = apply_gradient(g, u)
    out = np.asarray(prob.nonlinearity.fn(u, p), dtype=float)
    if out.shape != u.shape:
        out = np.full_like(u, float(out))
    bad = ~np.isfinite(out)
    if bad.any():
        i = int(np.argmax(bad))
        raise NonFiniteStateError(
            f"nonlinearity '{prob.nonlinearity.label}' returned {out[i]!r} "
            f"at node {i} (u={u[i]!r}, du={p[i]!r})"
        )
    return out


# --- built-in nonlinearities (compiled scalar kernels) ----------------------

@njit(cache=True)
def _f_zero(u, p):
    return 0.0 * u


@njit(cache=True)
def _f_u_px2(u, p):
    return u * p * p


@njit(cache=True)
def _f_u2_px2(u, p):
    return u * u * p * p


@njit(cache=True)
def _f_3u_px2(u, p):
    return 3.0 * u * p * p


@njit(cache=True)
def _f_logistic_px2(u, p):
    return u * (1.0 - u) + p * p


# --- built-in boundary functions ---------------------------------------------

@njit(cache=True)
def _bc_zero(t):
    return 0.0


@njit(cache=True)
def _bc_one(t):
    return 1.0


@njit(cache=True)
def _bc_two(t):
    return 2.0


@njit(cache=True)
def _bc_three(t):
    return 3.0


@njit(cache=True)
def _bc_cos3pi(t):
    return 1.0 + np.cos(3.0 * np.pi * t)


@njit(cache=True)
def _bc_cos2pi(t):
    return 1.0 + np.cos(2.0 * np.pi * t)


@njit(cache=True)
def _bc_sin_half_pi_plus2(t):
    return 2.0 + np.sin(0.5 * np.pi * t)


@njit(cache=True)
def _bc_sin_half_pi_plus3(t):
    return 3.0 + np.sin(0.5 * np.pi * t)


# --- built-in initial profiles (vectorized) ----------------------------------

def _u0_ex1(x):
    return 1.0 + 2.0 * np.sin(0.5 * np.pi * x)


def _u0_ex2(x):
    return np.sin(np.pi * x) + 1.0


def _u0_ex3(x):
    return 2.0 + np.sin(2.0 * np.pi * x)


def _u0_ex4(x):
    return 1.0 + x + np.cos(2.0 * np.pi * x)


def _u0_sin_pi(x):
    return np.sin(np.pi * x)


def _u0_one(x):
    return np.ones_like(x)


T_FINAL = 0.5

_REGISTRY: dict[str, Problem] = {}
_SUMMARIES: dict[str, str] = {}


def _register(prob: Problem, summary: str) -> None:
    _REGISTRY[prob.id] = prob
    _SUMMARIES[prob.id] = summary


_register(
    Problem(
        id="ex1",
        nonlinearity=Nonlinearity(_f_u_px2, "u*p^2"),
        bc=BoundarySpec(_bc_one, _bc_three),
        initial=_u0_ex1,
        t_final=T_FINAL,
    ),
    "f(u,p) = u p^2; b1 = 1, b2 = 3; u0 = 1 + 2 sin(pi x / 2)",
)
_register(
    Problem(
        id="ex2",
        nonlinearity=Nonlinearity(_f_u2_px2, "u^2*p^2"),
        bc=BoundarySpec(_bc_one, _bc_one),
        initial=_u0_ex2,
        t_final=T_FINAL,
    ),
    "f(u,p) = u^2 p^2; b1 = b2 = 1; u0 = sin(pi x) + 1",
)
_register(
    Problem(
        id="ex3",
        nonlinearity=Nonlinearity(_f_3u_px2, "3u*p^2"),
        bc=BoundarySpec(_bc_two, _bc_cos3pi),
        initial=_u0_ex3,
        t_final=T_FINAL,
    ),
    "f(u,p) = 3u p^2; b1 = 2, b2(t) = 1 + cos(3 pi t); u0 = 2 + sin(2 pi x)",
)
_register(
    Problem(
        id="ex4",
        nonlinearity=Nonlinearity(_f_logistic_px2, "u(1-u)+p^2"),
        bc=BoundarySpec(_bc_cos2pi, _bc_sin_half_pi_plus2),
        initial=_u0_ex4,
        t_final=T_FINAL,
    ),
    "f(u,p) = u(1-u) + p^2; b1(t) = 1 + cos(2 pi t), b2(t) = 2 + sin(pi t / 2); "
    "u0 = 1 + x + cos(2 pi x) (right boundary incompatible at t = 0)",
)
_register(
    Problem(
        id="ex4c",
        nonlinearity=Nonlinearity(_f_logistic_px2, "u(1-u)+p^2"),
        bc=BoundarySpec(_bc_cos2pi, _bc_sin_half_pi_plus3),
        initial=_u0_ex4,
        t_final=T_FINAL,
    ),
    "ex4 with b2(t) = 3 + sin(pi t / 2), compatible with u0 at both ends",
)
_register(
    Problem(
        id="heat",
        nonlinearity=Nonlinearity(_f_zero, "0"),
        bc=BoundarySpec(_bc_zero, _bc_zero),
        initial=_u0_sin_pi,
        t_final=T_FINAL,
    ),
    "pure diffusion; b1 = b2 = 0; u0 = sin(pi x)",
)
_register(
    Problem(
        id="constant",
        nonlinearity=Nonlinearity(_f_zero, "0"),
        bc=BoundarySpec(_bc_one, _bc_one),
        initial=_u0_one,
        t_final=T_FINAL,
    ),
    "constant state 1 with matching boundary values (fixed point of every method)",
)


def make_example(problem_id: str) -> Problem:
    """Return a registered problem by id.

    Raises KeyError listing the valid ids when the id is unknown.
    """
    try:
        return _REGISTRY[problem_id]
    except KeyError:
        valid = ", ".join(sorted(_REGISTRY))
        raise KeyError(f"unknown problem id {problem_id!r}; valid ids: {valid}") from None


def available_problems() -> tuple[str, ...]:
    return tuple(_REGISTRY)


def problem_summary(problem_id: str) -> str:
    make_example(problem_id)
    return _SUMMARIES[problem_id]
