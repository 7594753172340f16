"""Fractional Laplacians of radial powers ``c |x|^e``.

Order ``t`` in ``(0, 1)`` acts on powers by a Gamma-ratio multiplier::

    (-Delta)^t |x|^((2t-n)/2 + beta) = gamma_t(beta) |x|^((2t-n)/2 + beta - 2t)

for ``-(n+2t)/2 < beta < (n-2t)/2``. Orders ``s`` in ``(1, 2)`` are handled as
``(-Delta) o (-Delta)^(s-1)``, the ordinary Laplacian being exact on powers.
An independent check of ``gamma_t`` evaluates the singular integral itself
by folded quadrature (``quadrature_fraclap_oracle``).

All operators use the normalization with Fourier symbol ``|xi|^(2s)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import exponents
from ._folded import folded_power_integral
from .errors import DomainError, NumericalFailure
from .gammakit import gamma_ratio, log_gamma

__all__ = [
    "RadialPower",
    "SingularSolutionCheck",
    "admissible_beta_window",
    "gamma_t_beta",
    "laplacian_power",
    "frac_laplacian_power",
    "fraclap_constant",
    "quadrature_fraclap_oracle",
    "verify_singular_solution",
]


@dataclass(frozen=True)
class RadialPower:
    """The function ``x -> coefficient * |x|**exponent`` on ``R^n \\ {0}``.

    ``exponent`` may be a ``Fraction`` so that exponent arithmetic in
    ``frac_laplacian_power`` is exact.
    """

    coefficient: float
    exponent: float | Fraction

    def __call__(self, r):
        return self.coefficient * r ** float(self.exponent)

    def scale(self, factor: float) -> "RadialPower":
        return RadialPower(factor * self.coefficient, self.exponent)


def admissible_beta_window(n: int, t: float) -> tuple[float, float]:
    """Open interval of ``beta`` on which ``gamma_t(beta)`` describes the operator."""
    return -(n + 2 * t) / 2, (n - 2 * t) / 2


def _check_order(t):
    if not 0.0 < t < 1.0:
        raise DomainError(f"order must lie in (0, 1), got {t!r}")


def _check_window(n, t, beta):
    lo, hi = admissible_beta_window(n, t)
    if not lo < beta < hi:
        raise DomainError(f"beta={beta} outside the admissible window ({lo}, {hi})")


def _rgamma(x: float) -> float:
    """1/Gamma(x) for x > -1 (zero at the pole x = 0)."""
    if x > 0.0:
        return math.exp(-log_gamma(x))
    if x == 0.0:
        return 0.0
    # reflection on (-1, 0): 1/G(x) = sin(pi x) G(1 - x) / pi
    return math.sin(math.pi * x) * math.exp(log_gamma(1.0 - x)) / math.pi


def gamma_t_beta(n: int, t: float, beta: float) -> float:
    """Multiplier of ``(-Delta)^t`` on ``|x|^((2t-n)/2 + beta)``.

    ``gamma_t(beta) = 4^t G((n+2t+2b)/4) G((n+2t-2b)/4) / (G((n-2t-2b)/4) G((n-2t+2b)/4))``

    The value is even in ``beta``. It is positive for ``|beta| < (n-2t)/2``,
    vanishes at ``beta = -(n-2t)/2`` (the fundamental solution) and is
    negative below that, down to the edge of the window.
    """
    _check_order(t)
    _check_window(n, t, beta)
    b = abs(beta)
    num = gamma_ratio((n + 2 * t + 2 * b) / 4, (n - 2 * t + 2 * b) / 4)
    # (n + 2t - 2b)/4 > 0 on the window; (n - 2t - 2b)/4 lies in (-t/2, ...)
    rest = math.exp(log_gamma((n + 2 * t - 2 * b) / 4)) * _rgamma((n - 2 * t - 2 * b) / 4)
    return 2.0 ** (2 * t) * num * rest


def laplacian_power(n: int, f: RadialPower) -> RadialPower:
    """``-Delta (c |x|^eta) = -c eta (n + eta - 2) |x|^(eta - 2)``."""
    eta = f.exponent
    factor = -float(eta) * (n + float(eta) - 2)
    return RadialPower(f.coefficient * factor, eta - 2)


def _as_exact(x):
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def frac_laplacian_power(n: int, s: float, f: RadialPower) -> RadialPower:
    """``(-Delta)^s f`` for ``s`` in ``(1, 2)`` as ``(-Delta) (-Delta)^(s-1) f``.

    The exponent shift ``-2s`` is carried out in rational arithmetic on the
    binary values of ``s`` and the input exponent, so it is exact.
    """
    if not 1.0 < s < 2.0:
        raise DomainError(f"order s must lie in (1, 2), got {s!r}")
    t = s - 1.0
    e = _as_exact(f.exponent)
    st = _as_exact(s)
    beta = float(e - (Fraction(2) * (st - 1) - n) / 2)
    _check_window(n, t, beta)
    if f.coefficient == 0.0:
        return RadialPower(0.0, e - 2 * st)
    inner = RadialPower(f.coefficient * gamma_t_beta(n, t, beta), e - 2 * (st - 1))
    out = laplacian_power(n, inner)
    return RadialPower(out.coefficient, out.exponent)


def fraclap_constant(n: int, t: float) -> float:
    """``c_{n,t} = 4^t G(n/2 + t) / (pi^(n/2) |G(-t)|)`` for ``0 < t < 1``."""
    _check_order(t)
    # |G(-t)| = G(1 - t) / t
    log_c = (
        t * math.log(4.0)
        + log_gamma(n / 2 + t)
        - 0.5 * n * math.log(math.pi)
        - log_gamma(1.0 - t)
        + math.log(t)
    )
    return math.exp(log_c)


def quadrature_fraclap_oracle(n: int, t: float, e: float, tol: float = 1e-10) -> float:
    """Coefficient of ``|x|^(e - 2t)`` in ``(-Delta)^t |x|^e`` by direct quadrature.

    Evaluates ``c_{n,t} p.v. int (|x|^e - |y|^e) |x - y|^(-n-2t) dy`` at
    ``|x| = 1`` with the folded radial/zonal reduction. Shares no code with
    :func:`gamma_t_beta`.

    Raises
    ------
    NumericalFailure
        When the adaptive quadrature cannot reach ``tol``.
    """
    _check_order(t)
    if n < 1:
        raise DomainError(f"dimension must be positive, got {n}")
    beta = e - (2 * t - n) / 2
    _check_window(n, t, beta)
    value = folded_power_integral(n, t, -e, epsrel=tol)
    if not math.isfinite(value):
        raise NumericalFailure(f"oracle integral is not finite for n={n}, t={t}, e={e}")
    return fraclap_constant(n, t) * value


@dataclass(frozen=True)
class SingularSolutionCheck:
    n: int
    s: float
    p: float
    amplitude: float
    beta: float
    beta_in_window: bool
    output: RadialPower
    expected_exponent: Fraction
    exponent_match: bool
    coefficient_residual: float

    @property
    def passed(self) -> bool:
        return self.exponent_match and self.beta_in_window and self.coefficient_residual < 1e-10


def verify_singular_solution(n: int, s: float, p: float) -> SingularSolutionCheck:
    """Apply ``(-Delta)^s`` to ``A |x|^(-2s/(p-1))`` and compare with ``A^p |x|^(-2sp/(p-1))``."""
    if not 1.0 < s < 2.0:
        raise DomainError(f"order s must lie in (1, 2), got {s!r}")
    amp = exponents.singular_amplitude(n, s, p)  # raises unless p > p_S
    sf, pf = Fraction(s), Fraction(p)
    e = -2 * sf / (pf - 1)
    beta = float(e - (2 * (sf - 1) - n) / 2)
    lo, hi = admissible_beta_window(n, s - 1.0)
    out = frac_laplacian_power(n, s, RadialPower(amp, e))
    expected_exp = -2 * sf * pf / (pf - 1)
    target = amp**p
    return SingularSolutionCheck(
        n=n,
        s=s,
        p=p,
        amplitude=amp,
        beta=beta,
        beta_in_window=lo < beta < hi,
        output=out,
        expected_exponent=expected_exp,
        exponent_match=out.exponent == expected_exp,
        coefficient_residual=abs(out.coefficient - target) / abs(target),
    )
