"""Exception types shared across the package."""


class SingularSystemError(RuntimeError):
    """Tridiagonal elimination hit a near-zero pivot."""


class StabilityViolationError(ValueError):
    """An explicit time step exceeds the diffusion stability bound."""


class NonFiniteStateError(FloatingPointError):
    """A field left the finite floating-point range (NaN or infinity)."""


class UndefinedOrderError(ValueError):
    """Too few positive errors remain to fit a convergence order."""
