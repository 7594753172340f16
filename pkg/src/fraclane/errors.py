"""Exception types shared by every module of the package."""


class DomainError(ValueError):
    """Raised when an input lies outside the domain of an operation."""


class NumericalFailure(RuntimeError):
    """Raised when a quadrature, root finder or ODE solve does not converge."""
