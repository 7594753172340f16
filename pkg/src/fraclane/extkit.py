"""Per-frequency extension problem for ``(-Delta)^s`` with ``1 < s < 2``.

For ``u_e(x, y) = exp(i <xi, x>) phi(y)`` the degenerate biharmonic extension
``Delta_b^2 u_e = 0`` (``b = 3 - 2s``) splits into

    chi'' + (b/y) chi' - xi^2 chi = 0
    phi'' + (b/y) phi' - xi^2 phi = chi

with ``phi(0) = 1``, ``y^b phi' -> 0`` at ``y = 0`` and decay at infinity.
The Dirichlet-to-Neumann multiplier is ``m(xi) = lim y^b chi'(y)``, which
is proportional to ``|xi|^(2s)``.

Solving: two decaying solutions are integrated from ``y_max = 40/xi`` down
to ``y0 = 0.01/xi`` (the growing modes die out in that direction) and
matched there to Frobenius series with local exponents ``0, 2`` and
``1 - b, 3 - b``. The ``y^(1-b)`` term of ``phi`` is excluded, which is the
weighted Neumann condition.

The module also provides a finite-difference ``Delta_b`` and the two
product identities used for cut-off estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, NumericalFailure

__all__ = [
    "GridConfig",
    "ExtensionProfile",
    "IdentityReport",
    "solve_extension_profile",
    "extract_dtn_multiplier",
    "dtn_multiplier_closed_form",
    "fit_symbol_exponent",
    "delta_b_fd",
    "gradient_fd",
    "check_product_identities",
    "identity_convergence_order",
    "random_smooth_field",
]

RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class GridConfig:
    """Lengths are in units of ``1/xi``."""

    y0: float = 0.01
    y_max: float = 40.0
    y_min: float = 1e-4  # first sample point
    n_points: int = 400
    rtol: float = 1e-13
    series_terms: int = 30
    max_log_step: float = 0.02  # in ln y; keeps the dense output accurate


@dataclass(frozen=True)
class ExtensionProfile:
    xi: float
    s: float
    b: float
    y_grid: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    chi: np.ndarray = field(repr=False)
    multiplier: float
    a2: float  # y^2 coefficient of phi
    c3: float  # y^(3-b) coefficient of phi
    residual: float  # max scaled ODE residual on the integrated part of the grid
    neumann_slope: float  # d ln|y^b phi'| / d ln y near y0, expected 4 - 2s > 0


def _d(r, b):
    # (d^2 + (b/y) d) y^r = d(r, b) y^(r-2)
    return r * (r - 1.0 + b)


def _frobenius(sigma, p0, p1, xi, b, y, terms):
    """Values ``(phi, phi', chi, chi')`` of one local family at ``y``.

    ``phi = sum p_j y^(sigma+2j)``, ``chi = sum q_j y^(sigma+2j)``.
    """
    xi2 = xi * xi
    p = [p0, p1]
    q = [p1 * _d(sigma + 2, b) - xi2 * p0]
    for j in range(1, terms):
        q.append(xi2 * q[j - 1] / _d(sigma + 2 * j, b))
        p.append((q[j] + xi2 * p[j]) / _d(sigma + 2 * j + 2, b))
    out = np.zeros(4)
    for j in range(len(p)):
        e = sigma + 2 * j
        if p[j] != 0.0:
            out[0] += p[j] * y**e
            if e != 0:
                out[1] += p[j] * e * y ** (e - 1)
    for j in range(len(q)):
        # chi has exponent sigma + 2j for the j-th q coefficient
        e = sigma + 2 * j
        out[2] += q[j] * y**e
        if e != 0:
            out[3] += q[j] * e * y ** (e - 1)
    return out


def _rhs(xi, b):
    xi2 = xi * xi

    # independent variable ln y keeps steps proportional to y near the origin
    def f(x, z):
        y = math.exp(x)
        phi, dphi, chi, dchi = z
        return [y * dphi, y * (chi + xi2 * phi) - b * dphi, y * dchi, y * xi2 * chi - b * dchi]

    return f


def _check_xs(xi, s):
    if not (xi > 0 and math.isfinite(xi)):
        raise DomainError(f"frequency must be positive and finite, got {xi!r}")
    if not 1.0 < s < 2.0:
        raise DomainError(f"order s must lie in (1, 2), got {s!r}")


def solve_extension_profile(xi: float, s: float, grid_config: GridConfig | None = None) -> ExtensionProfile:
    """Decaying trace-one solution of the extension system at frequency ``xi``.

    Raises
    ------
    NumericalFailure
        If the integration or the matching fails, or the residual exceeds 1e-8.
    """
    _check_xs(xi, s)
    cfg = grid_config or GridConfig()
    b = 3.0 - 2.0 * s
    y0 = cfg.y0 / xi
    ymax = cfg.y_max / xi
    f = _rhs(xi, b)
    # decaying far-field data: homogeneous phi, and chi with phi = 0
    starts = ([1.0, -xi, 0.0, 0.0], [0.0, 0.0, 1.0, -xi])
    sols = []
    for z0 in starts:
        sol = solve_ivp(f, (math.log(ymax), math.log(y0)), z0, method="DOP853",
                        rtol=cfg.rtol, atol=1e-30, max_step=cfg.max_log_step,
                        dense_output=True)
        if not sol.success:
            raise NumericalFailure(f"profile integration failed: {sol.message}")
        sols.append(sol)
    za = sols[0].y[:, -1]
    zb = sols[1].y[:, -1]
    fam_a0 = _frobenius(0.0, 1.0, 0.0, xi, b, y0, cfg.series_terms)
    fam_a2 = _frobenius(0.0, 0.0, 1.0, xi, b, y0, cfg.series_terms)
    fam_c3 = _frobenius(1.0 - b, 0.0, 1.0, xi, b, y0, cfg.series_terms)
    # cA za + cB zb - a2 F2 - c3 F3 = F0
    M = np.column_stack([za, zb, -fam_a2, -fam_c3])
    scale = np.abs(M).max(axis=0)
    try:
        x = np.linalg.solve(M / scale, fam_a0) / scale
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"Frobenius matching is singular: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise NumericalFailure("Frobenius matching produced non-finite coefficients")
    ca, cb, a2, c3 = (float(v) for v in x)
    multiplier = 2.0 * (1.0 - b) * (3.0 - b) * c3

    y_grid = np.geomspace(cfg.y_min / xi, ymax, cfg.n_points)
    Z = np.empty((4, y_grid.size))
    inner = y_grid < y0
    for k in np.nonzero(inner)[0]:
        yk = y_grid[k]
        Z[:, k] = (_frobenius(0.0, 1.0, a2, xi, b, yk, cfg.series_terms)
                   + c3 * _frobenius(1.0 - b, 0.0, 1.0, xi, b, yk, cfg.series_terms))
    outer = ~inner
    yo = y_grid[outer]

    def state(y):
        x = np.log(y)
        return ca * sols[0].sol(x) + cb * sols[1].sol(x)

    Z[:, outer] = state(yo)
    residual = _residual(state, yo[1:-1], xi, b)
    if not residual <= RESIDUAL_TOL:
        raise NumericalFailure(f"profile residual {residual:.3e} exceeds {RESIDUAL_TOL}")
    yn = y0 * np.array([1.0, 4.0])
    flux = np.abs(yn**b * state(yn)[1])
    slope = float(np.log(flux[1] / flux[0]) / np.log(4.0))
    return ExtensionProfile(
        xi=xi, s=s, b=b, y_grid=y_grid, phi=Z[0].copy(), chi=Z[2].copy(),
        multiplier=multiplier, a2=a2, c3=c3, residual=residual, neumann_slope=slope,
    )


def _residual(state, y, xi, b):
    """Max ODE residual, derivatives of the dense output by 4th-order differences."""
    h = 1e-3 * np.minimum(y, 1.0 / xi)

    def deriv(k):
        return (-state(y + 2 * h)[k] + 8 * state(y + h)[k]
                - 8 * state(y - h)[k] + state(y - 2 * h)[k]) / (12 * h)

    z = state(y)
    d2phi = deriv(1)
    d2chi = deriv(3)
    r1 = d2phi + b * z[1] / y - xi**2 * z[0] - z[2]
    r2 = d2chi + b * z[3] / y - xi**2 * z[2]
    # scale each equation by the size of its terms
    s1 = np.abs(xi**2 * z[0]).max() + np.abs(z[2]).max()
    s2 = np.abs(xi**2 * z[2]).max()
    return float(max(np.abs(r1).max() / s1, np.abs(r2).max() / s2))


def extract_dtn_multiplier(profile: ExtensionProfile) -> float:
    """``m(xi) = lim_{y->0} y^b chi'(y)`` from the Frobenius coefficient of ``y^(3-b)``."""
    m = profile.multiplier
    if not (math.isfinite(m) and m > 0):
        raise NumericalFailure(f"multiplier {m!r} is not positive")
    return m


def dtn_multiplier_closed_form(xi: float, s: float) -> float:
    """``2^(3-2s) Gamma(2-s)/Gamma(s) xi^(2s)`` from the Bessel-function solution."""
    _check_xs(xi, s)
    return 2.0 ** (3 - 2 * s) * math.gamma(2 - s) / math.gamma(s) * xi ** (2 * s)


def fit_symbol_exponent(multipliers) -> tuple[float, float]:
    """Least-squares fit ``ln m = k ln xi + ln C``; returns ``(k, C)``.

    Raises
    ------
    DomainError
        With fewer than four distinct frequencies, a span below a factor 8,
        or nonpositive entries.
    """
    pairs = [(float(x), float(m)) for x, m in multipliers]
    xs = sorted({x for x, _ in pairs})
    if len(xs) < 4:
        raise DomainError(f"need at least 4 distinct frequencies, got {len(xs)}")
    if any(x <= 0 or m <= 0 for x, m in pairs):
        raise DomainError("frequencies and multipliers must be positive")
    if xs[-1] / xs[0] < 8.0:
        raise DomainError(f"frequencies span a factor {xs[-1] / xs[0]:.3g} < 8")
    lx = np.log([x for x, _ in pairs])
    lm = np.log([m for _, m in pairs])
    k, c = np.polyfit(lx, lm, 1)
    return float(k), float(math.exp(c))


# ---------------------------------------------------------------- finite differences

def _split(point):
    pt = np.asarray(point, dtype=float)
    if pt.ndim != 1 or pt.size < 2:
        raise DomainError("point must be (x_1, ..., x_n, y) with n >= 1")
    return pt


def delta_b_fd(field, point, h: float, b: float) -> float:
    """Second-order central difference for ``Delta w + (b/y) w_y``.

    ``field`` takes a point ``(x_1, ..., x_n, y)``; the last coordinate is ``y``.
    """
    pt = _split(point)
    y = pt[-1]
    if not y > h:
        raise DomainError(f"need y > h, got y={y}, h={h}")
    w0 = field(pt)
    lap = 0.0
    dy = 0.0
    for i in range(pt.size):
        e = np.zeros_like(pt)
        e[i] = h
        wp, wm = field(pt + e), field(pt - e)
        lap += (wp - 2.0 * w0 + wm) / (h * h)
        if i == pt.size - 1:
            dy = (wp - wm) / (2.0 * h)
    return float(lap + b * dy / y)


def gradient_fd(field, point, h: float) -> np.ndarray:
    pt = _split(point)
    g = np.empty(pt.size)
    for i in range(pt.size):
        e = np.zeros_like(pt)
        e[i] = h
        g[i] = (field(pt + e) - field(pt - e)) / (2.0 * h)
    return g


@dataclass(frozen=True)
class IdentityReport:
    h: float
    first: float  # max |residual| of the product rule
    second: float  # max |residual| of the quadratic identity


def check_product_identities(zeta, eta, points, h: float, b: float) -> IdentityReport:
    """Max residuals of the two ``Delta_b`` product identities at ``points``."""
    r1 = r2 = 0.0
    for pt in points:
        pt = _split(pt)
        z, e = zeta(pt), eta(pt)
        lz = delta_b_fd(zeta, pt, h, b)
        le = delta_b_fd(eta, pt, h, b)
        gz = gradient_fd(zeta, pt, h)
        ge = gradient_fd(eta, pt, h)
        l_ze = delta_b_fd(lambda X: zeta(X) * eta(X), pt, h, b)
        l_zee = delta_b_fd(lambda X: zeta(X) * eta(X) ** 2, pt, h, b)
        dot = float(gz @ ge)
        first = l_ze - (e * lz + z * le + 2.0 * dot)
        lhs = lz * l_zee - l_ze**2
        rhs = (-(z**2) * le**2 + 2.0 * z * lz * float(ge @ ge)
               - 4.0 * dot**2 - 4.0 * z * le * dot)
        r1 = max(r1, abs(first))
        r2 = max(r2, abs(lhs - rhs))
    return IdentityReport(h=h, first=r1, second=r2)


def identity_convergence_order(zeta, eta, points, b: float, hs=(1e-2, 5e-3, 2.5e-3)):
    """Observed orders ``(p1, p2)`` of both residuals from a least-squares log fit."""
    reports = [check_product_identities(zeta, eta, points, h, b) for h in hs]
    lh = np.log(hs)
    orders = []
    for attr in ("first", "second"):
        r = np.array([getattr(rep, attr) for rep in reports])
        if np.all(r == 0.0):
            orders.append(math.inf)
            continue
        orders.append(float(np.polyfit(lh, np.log(r), 1)[0]))
    return tuple(orders), reports


def random_smooth_field(rng: np.random.Generator, dim: int):
    """``A exp(-|c|^2 ... ) cos(k.X + phase)``-type field on ``R^dim`` (last coordinate ``y``)."""
    k = rng.normal(size=dim)
    c = 0.5 * rng.normal(size=dim)
    phase = rng.uniform(0, 2 * math.pi)
    amp = rng.uniform(0.5, 2.0)
    shift = rng.uniform(0.5, 1.5)

    def f(X):
        X = np.asarray(X, dtype=float)
        return amp * math.exp(float(c @ X)) * (shift + math.cos(float(k @ X) + phase))

    return f
