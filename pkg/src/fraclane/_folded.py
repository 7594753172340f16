"""Folded radial x sphere quadrature for nonlocal integrals of radial powers.

For a point ``x`` on the unit sphere of ``R^n`` and ``y = rho * sigma``,

    p.v. int (|x|^e - |y|^e) / |x - y|^(n + 2t) dy
        = int_0^1 N(rho) * S(rho) drho

after folding ``rho -> 1/rho`` onto ``(0, 1]``, where

    N(rho) = rho^(n-1) - rho^(n-1-a) + rho^(2t-1) - rho^(2t-1+a),  a = -e
    S(rho) = int_{S^{n-1}} (1 + rho^2 - 2 rho mu)^(-(n+2t)/2) dsigma

``N`` vanishes to second order at ``rho = 1``, so the principal value is
not needed when ``t < 1``. The sphere integral is reduced to the zonal
variable ``v = 1 - mu`` with weight ``(v (2 - v))^((n-3)/2)`` and evaluated
with Gauss rules on panels graded towards the peak at ``v ~ (1-rho)^2``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_jacobi

from .errors import NumericalFailure
from .gammakit import log_gamma

_PANEL_NODES = 24
_SERIES_CUTOFF = 0.1  # |ln rho| below which N is summed as a series


def sphere_area(dim: int) -> float:
    """Surface measure of the unit sphere ``S^dim`` in ``R^(dim+1)``."""
    if dim == 0:
        return 2.0
    h = 0.5 * (dim + 1)
    return 2.0 * math.exp(h * math.log(math.pi) - log_gamma(h))


@lru_cache(maxsize=None)
def _jacobi(alpha: float, beta: float):
    x, w = roots_jacobi(_PANEL_NODES, alpha, beta)
    return x, w


def folded_numerator(rho, n: int, order: float, a: float):
    """``N(rho)`` with a cancellation-free series near ``rho = 1``."""
    rho = np.asarray(rho, dtype=float)
    c = np.array([n - 1.0, n - 1.0 - a, 2 * order - 1.0, 2 * order - 1.0 + a])
    sign = np.array([1.0, -1.0, 1.0, -1.0])
    L = np.log(rho)
    out = np.empty_like(rho)
    near = np.abs(L) < _SERIES_CUTOFF
    far = ~near
    if np.any(far):
        Lf = L[far][..., None]
        out[far] = np.sum(sign * np.exp(c * Lf), axis=-1)
    if np.any(near):
        Ln = L[near]
        acc = np.zeros_like(Ln)
        term = Ln.copy()  # L^k / k!
        cpow = c.copy()  # c^k
        for k in range(2, 80):
            term = term * Ln / k
            cpow = cpow * c
            acc += term * np.dot(sign, cpow)
            # the k = 0, 1 terms cancel exactly; stop on a bound, not on one
            # increment, since odd or even terms may vanish identically
            if np.all(np.abs(term) * np.sum(np.abs(cpow)) <= 1e-18 * np.abs(acc)):
                break
        out[near] = acc
    return out


def _panels(start: float, v0: float):
    pts = [start]
    x = start
    if x == 0.0:
        x = min(v0, 2.0)
        pts.append(x)
    while x < 2.0:
        nxt = min(4.0 * x, 2.0)
        if x < v0 < nxt:
            nxt = v0
        pts.append(nxt)
        x = nxt
    return pts


def zonal_integral(rho: float, n: int, order: float, v_min: float = 0.0) -> float:
    """``int_{v_min}^2 (v(2-v))^((n-3)/2) (1 + rho^2 - 2 rho (1-v))^(-(n+2 order)/2) dv``."""
    q = 0.5 * (n + 2.0 * order)
    u = 1.0 - rho
    u2 = u * u
    two_rho = 2.0 * rho
    w_exp = 0.5 * (n - 3)
    v0 = u2 / two_rho if rho > 0 else math.inf
    pts = _panels(v_min, v0)
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi <= lo:
            continue
        at_zero = lo == 0.0
        at_two = hi == 2.0
        # roots_jacobi weight: (1 - x)^alpha (1 + x)^beta on [-1, 1]
        alpha = w_exp if at_two else 0.0
        beta = w_exp if at_zero else 0.0
        x, w = _jacobi(alpha, beta)
        half = 0.5 * (hi - lo)
        v = lo + half * (x + 1.0)
        g = (u2 + two_rho * v) ** (-q)
        if not at_zero:
            g = g * v**w_exp
        if not at_two:
            g = g * (2.0 - v) ** w_exp
        total += half ** (1.0 + alpha + beta) * np.dot(w, g)
    return total


def sphere_kernel(rho: float, n: int, order: float, v_min: float = 0.0) -> float:
    """Integral of ``|e_1 - rho sigma|^(-(n+2 order))`` over ``sigma`` with ``1 - mu >= v_min``."""
    q = 0.5 * (n + 2.0 * order)
    if n == 1:
        val = (1.0 + rho) ** (-2 * q)
        if v_min <= 0.0:
            val += (1.0 - rho) ** (-2 * q)
        return val
    return sphere_area(n - 2) * zonal_integral(rho, n, order, v_min)


def folded_power_integral(
    n: int,
    order: float,
    a: float,
    v_min: float = 0.0,
    epsrel: float = 1e-11,
) -> float:
    """``int_0^1 N(rho) S(rho) drho`` with the sphere restricted to ``1 - mu >= v_min``.

    Raises
    ------
    NumericalFailure
        If the adaptive outer quadrature reports non-convergence.
    """

    def integrand(rho):
        if rho <= 0.0 or rho >= 1.0:
            return 0.0
        return float(folded_numerator(np.array([rho]), n, order, a)[0]) * sphere_kernel(
            rho, n, order, v_min
        )

    # split at rho = 1/2 so each piece has one endpoint singularity
    return sum(_quad_checked(integrand, lo, hi, epsrel) for lo, hi in ((0.0, 0.5), (0.5, 1.0)))


def _quad_checked(f, lo, hi, epsrel):
    res = quad(f, lo, hi, epsabs=0.0, epsrel=epsrel, limit=400, full_output=True)
    val, err = res[0], res[1]
    # quad appends a warning message only when it could not meet the tolerance
    if len(res) > 3 and not abs(err) <= max(1e-9 * abs(val), 1e-14):
        raise NumericalFailure(f"quadrature did not converge on [{lo}, {hi}]: {res[3]}")
    return val
