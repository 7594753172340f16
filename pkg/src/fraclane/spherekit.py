"""Zonal kernels for homogeneous functions on the sphere.

Writing ``y = |x| t sigma`` in the nonlocal integral of ``|y|^(-alpha) psi``
and folding ``t -> 1/t`` gives the one-dimensional kernel

    K_alpha(mu) = int_0^1 (t^(n-1-alpha) + t^(2s-1+alpha)) (t^2 + 1 - 2 t mu)^(-(n+2s)/2) dt

between directions with cosine ``mu``. ``K_alpha`` is symmetric under
``alpha -> n - 2s - alpha`` and strictly decreasing on ``alpha < (n-2s)/2``,
so for ``p > p_S`` it is larger at ``alpha = 2s/(p-1)`` than at the Hardy
homogeneity ``(n-2s)/2``. This is the pointwise comparison used to rule out
stable homogeneous solutions.

The angular constants obtained by integrating the folded numerator against
the full sphere diverge for ``s > 1``; they are available only with a polar
cutoff ``mu <= 1 - delta`` together with a fit of the divergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import least_squares

from . import exponents
from ._folded import folded_power_integral
from .errors import DomainError, NumericalFailure

__all__ = [
    "KernelParams",
    "RegularizedConstant",
    "KernelComparison",
    "MU_GAP_MIN",
    "kernel_K",
    "kernel_alpha_derivative",
    "kernel_comparison",
    "regularized_constant",
    "DEFAULT_DELTA_LADDER",
]

MU_GAP_MIN = 1e-8
DEFAULT_DELTA_LADDER = tuple(np.geomspace(1e-1, 1e-4, 13))


@dataclass(frozen=True)
class KernelParams:
    n: int
    s: float
    alpha: float
    mu: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"kernels need dimension n >= 2, got {self.n!r}")
        if not 0.0 < self.s < 2.0:
            raise DomainError(f"order s must lie in (0, 2), got {self.s!r}")
        if not -2 * self.s < self.alpha < self.n:
            raise DomainError(
                f"alpha={self.alpha} outside (-2s, n) = ({-2 * self.s}, {self.n})"
            )
        if not -1.0 <= self.mu <= 1.0 - MU_GAP_MIN:
            raise DomainError(f"mu={self.mu} must lie in [-1, 1 - {MU_GAP_MIN}]")


def _t_integral(h, mu, lo, epsabs=0.0):
    """``int_0^1 t^lo h(log t) dt`` with ``lo > -1``.

    The substitution ``t = u^m`` keeps the integrand bounded at 0 even when
    ``lo`` approaches -1; ``h`` receives ``log t`` so that ``u^m`` never
    has to be formed.
    """
    m = max(1, math.ceil(0.5 / (1.0 + lo)))
    k = m * (1.0 + lo) - 1.0

    def f(u):
        if u <= 0.0:
            return 0.0
        lu = math.log(u)
        return m * math.exp(k * lu) * h(m * lu)

    # peak of (t^2 + 1 - 2 t mu)^(-q) at t = 1 has width ~ sqrt(2 (1 - mu))
    width = math.sqrt(2.0 * (1.0 - mu))
    pts = sorted({x ** (1.0 / m) for x in (1.0 - width, 1.0 - 0.1 * width) if 0.0 < x < 1.0})
    res = quad(f, 0.0, 1.0, points=pts or None, epsabs=epsabs, epsrel=1e-12,
               limit=400, full_output=True)
    val, err = res[0], res[1]
    if len(res) > 3 and not abs(err) <= max(1e-10 * abs(val), 10 * epsabs, 1e-300):
        raise NumericalFailure(f"kernel quadrature did not converge: {res[3]}")
    return val


def _bracket(lt, mu, q):
    t = math.exp(lt)
    return ((1.0 - t) ** 2 + 2.0 * t * (1.0 - mu)) ** (-q)


def kernel_K(params: KernelParams) -> float:
    n, s, a, mu = params.n, params.s, params.alpha, params.mu
    q = 0.5 * (n + 2 * s)
    e1, e2 = n - 1 - a, 2 * s - 1 + a
    lo, d = min(e1, e2), abs(e2 - e1)

    def h(lt):
        return (1.0 + math.exp(d * lt)) * _bracket(lt, mu, q)

    return _t_integral(h, mu, lo)


def kernel_alpha_derivative(params: KernelParams) -> float:
    """``d K_alpha / d alpha``, negative for ``alpha < (n - 2s)/2``."""
    n, s, a, mu = params.n, params.s, params.alpha, params.mu
    q = 0.5 * (n + 2 * s)
    e1, e2 = n - 1 - a, 2 * s - 1 + a
    if e1 == e2:
        return 0.0
    lo, d = min(e1, e2), e2 - e1

    def h(lt):
        # t^e2 - t^e1 = t^lo (+-) expm1(|d| log t), free of cancellation
        return lt * math.copysign(math.expm1(abs(d) * lt), -d) * _bracket(lt, mu, q)

    def envelope(lt):
        return lt * lt * _bracket(lt, mu, q)

    # |t^e2 - t^e1| <= |d| |log t| t^lo bounds the integrand
    floor = 1e-13 * abs(d) * _t_integral(envelope, mu, lo)
    return _t_integral(h, mu, lo, epsabs=floor)


@dataclass(frozen=True)
class KernelComparison:
    n: int
    s: float
    p: float
    alpha_hardy: float
    alpha_solution: float
    mu: tuple
    k_hardy: tuple
    k_solution: tuple
    margins: tuple = field(repr=False)

    @property
    def min_margin(self) -> float:
        return min(self.margins)

    @property
    def max_margin(self) -> float:
        return max(self.margins)

    @property
    def passed(self) -> bool:
        return all(m > 0 for m in self.margins)


def kernel_comparison(n: int, s: float, p: float, mu_grid) -> KernelComparison:
    """Compare ``K_{(n-2s)/2}`` with ``K_{2s/(p-1)}`` on a grid of cosines.

    ``passed`` is true when ``K_{2s/(p-1)} > K_{(n-2s)/2}`` at every grid point.
    """
    exponents.ProblemParams(n, s, p)
    if not n > 2 * s:
        raise DomainError(f"kernel comparison needs n > 2s, got n={n}, s={s}")
    a_h = (n - 2 * s) / 2
    a_u = 2 * s / (p - 1)
    mus = tuple(float(m) for m in mu_grid)
    kh = tuple(kernel_K(KernelParams(n, s, a_h, m)) for m in mus)
    ku = tuple(kernel_K(KernelParams(n, s, a_u, m)) for m in mus)
    return KernelComparison(
        n=n, s=s, p=p, alpha_hardy=a_h, alpha_solution=a_u, mu=mus,
        k_hardy=kh, k_solution=ku, margins=tuple(u - h for u, h in zip(ku, kh)),
    )


@dataclass(frozen=True)
class RegularizedConstant:
    """Cutoff value at ``delta`` and, for ``s > 1``, the divergence fit.

    ``divergence_fit`` is ``(exponent, coefficient)`` of the leading term
    ``coefficient * delta**exponent``; ``None`` when ``s <= 1``.
    ``limit_estimate`` is the fitted constant term.
    """

    value: float
    delta: float
    divergence_fit: tuple[float, float] | None = None
    limit_estimate: float | None = None
    ladder: tuple = ()
    ladder_values: tuple = ()


def _cutoff_value(n, s, a, delta):
    if not 1e-4 * (1 - 1e-12) <= delta <= 0.5:
        raise DomainError(f"delta={delta} outside [1e-4, 0.5]")
    return folded_power_integral(n, s, a, v_min=delta)


def _fit_divergence(deltas, values, s):
    """Fit ``c0 + c1 d^g + c2 d^(g+1)`` with the exponent ``g`` free."""
    d = np.asarray(deltas)
    v = np.asarray(values)

    def linear_part(g):
        A = np.column_stack([np.ones_like(d), d**g, d ** (g + 1)])
        coef, *_ = np.linalg.lstsq(A, v, rcond=None)
        return coef, A @ coef - v

    def resid(x):
        return linear_part(x[0])[1] / np.abs(v).max()

    sol = least_squares(resid, x0=[1.0 - s], bounds=([-3.0], [0.0]), xtol=1e-14, ftol=1e-14)
    if not sol.success:
        raise NumericalFailure(f"divergence fit failed: {sol.message}")
    g = float(sol.x[0])
    coef, _ = linear_part(g)
    return g, coef


def regularized_constant(
    n: int, s: float, a: float, delta: float, ladder=DEFAULT_DELTA_LADDER
) -> RegularizedConstant:
    """Cutoff angular constant for homogeneity ``a``.

    ``|S^(n-2)| int_{-1}^{1-delta} (1-mu^2)^((n-3)/2) int_0^1 N_a(t) (t^2+1-2t mu)^(-(n+2s)/2) dt dmu``
    with ``N_a(t) = t^(n-1) - t^(n-1-a) + t^(2s-1) - t^(2s-1+a)``. With
    ``a = 2s/(p-1)`` this regularizes the constant multiplying ``psi`` in the
    equation for homogeneous solutions, with ``a = (n-2s)/2`` the integral
    form of the Hardy constant (both up to the factor ``c_{n,s}``).

    For ``s > 1`` the value grows like ``delta^(1-s)``; the ladder of cutoffs
    is used to fit that exponent and its coefficient. For ``s < 1`` the
    ladder provides the extrapolated ``delta -> 0`` limit.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"need dimension n >= 2, got {n!r}")
    if not 0.0 < s < 2.0 or s == 1.0:
        raise DomainError(f"order s must lie in (0, 1) or (1, 2), got {s!r}")
    if not 0.0 < a < n:
        raise DomainError(f"homogeneity a={a} outside (0, n)")
    value = _cutoff_value(n, s, a, delta)
    if ladder is None:
        return RegularizedConstant(value=value, delta=delta)
    lad = tuple(float(x) for x in ladder)
    vals = tuple(_cutoff_value(n, s, a, x) for x in lad)
    if s > 1.0:
        g, coef = _fit_divergence(lad, vals, s)
        return RegularizedConstant(
            value=value, delta=delta, divergence_fit=(g, float(coef[1])),
            limit_estimate=float(coef[0]), ladder=lad, ladder_values=vals,
        )
    # convergent case: remainder behaves like delta^(1-s) -> 0
    d = np.asarray(lad)
    A = np.column_stack([np.ones_like(d), d ** (1.0 - s), d ** (2.0 - s)])
    coef, *_ = np.linalg.lstsq(A, np.asarray(vals), rcond=None)
    return RegularizedConstant(
        value=value, delta=delta, limit_estimate=float(coef[0]), ladder=lad, ladder_values=vals,
    )
