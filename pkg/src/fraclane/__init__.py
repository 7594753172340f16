"""Stable solutions of (-Delta)^s u = |u|^(p-1) u: exponents, kernels and checks."""

from .errors import DomainError, NumericalFailure

__version__ = "0.1.0"

__all__ = ["DomainError", "NumericalFailure", "__version__"]
