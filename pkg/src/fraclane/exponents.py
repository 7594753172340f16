"""Critical exponents and the Gamma-ratio stability criterion.

For ``(-Delta)^s u = |u|^{p-1} u`` on ``R^n`` the relevant thresholds are

* the Sobolev exponent ``p_S = (n + 2s) / (n - 2s)`` (infinite for ``n <= 2s``),
* the Joseph-Lundgren exponent ``p_c``, the first zero above ``p_S`` of the
  discriminant ``Phi(p) = p R(p) - H`` where ``R`` is the singular-solution
  Gamma ratio and ``H`` the unscaled Hardy ratio.

Stable solutions vanish for ``p < p_S`` and for ``p > p_S`` with
``Phi > 0``. For ``s = 1`` and ``s = 2`` the zero of ``Phi`` has closed forms
which are exposed here as reference values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NumericalFailure
from .gammakit import gamma_ratio

__all__ = [
    "ProblemParams",
    "Verdict",
    "StabilityReport",
    "sobolev_exponent",
    "hardy_ratio",
    "hardy_constant",
    "amplitude_ratio",
    "singular_amplitude",
    "stability_discriminant",
    "classify",
    "joseph_lundgren_exponent",
    "pc_closed_form_s1",
    "pc_closed_form_s2",
    "dimension_condition_mono",
    "P_MAX",
    "SCAN_POINTS",
    "CRITICAL_RTOL",
]

P_MAX = 1e6
SCAN_POINTS = 400
CRITICAL_RTOL = 1e-12


@dataclass(frozen=True)
class ProblemParams:
    """Dimension ``n``, order ``s`` and nonlinearity ``p``."""

    n: int
    s: float
    p: float

    def __post_init__(self):
        _check_ns(self.n, self.s)
        if not self.p > 1.0:
            raise DomainError(f"p must exceed 1, got {self.p!r}")

    @property
    def b(self) -> float:
        return 3.0 - 2.0 * self.s

    @property
    def t(self) -> float:
        return self.s - 1.0


class Verdict(str, enum.Enum):
    SUBCRITICAL_LIOUVILLE = "SubcriticalLiouville"
    CRITICAL = "Critical"
    SUPERCRITICAL_LIOUVILLE = "SupercriticalLiouville"
    JL_REGIME = "JLRegime"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class StabilityReport:
    n: int
    s: float
    p: float
    p_sobolev: float
    hardy_ratio: Optional[float]
    hardy_constant: Optional[float]
    amplitude_ratio: Optional[float]
    amplitude: Optional[float]
    phi: Optional[float]
    verdict: Verdict


def _check_ns(n, s):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    if not 0.0 < s <= 2.0:
        raise DomainError(f"order s must lie in (0, 2], got {s!r}")


def sobolev_exponent(n: int, s: float) -> float:
    _check_ns(n, s)
    if n <= 2 * s:
        return math.inf
    return (n + 2 * s) / (n - 2 * s)


def hardy_ratio(n: int, s: float) -> float:
    """``Gamma((n+2s)/4)^2 / Gamma((n-2s)/4)^2``."""
    _check_ns(n, s)
    if not n > 2 * s:
        raise DomainError(f"Hardy constant needs n > 2s, got n={n}, s={s}")
    return gamma_ratio((n + 2 * s) / 4, (n - 2 * s) / 4) ** 2


def hardy_constant(n: int, s: float) -> float:
    """Optimal constant of the fractional Hardy inequality, ``4**s * H``."""
    return 2.0 ** (2 * s) * hardy_ratio(n, s)


def _require_supercritical(n, s, p):
    ps = sobolev_exponent(n, s)
    if not p > ps:
        raise DomainError(f"need p > p_S = {ps} for n={n}, s={s}; got p={p}")


def _amplitude_ratio(n, s, p):
    # caller guarantees n > 2s and p > p_S, so every argument is positive
    q = s / (p - 1.0)
    return gamma_ratio(n / 2 - q, q) * gamma_ratio(s + q, (n - 2 * s) / 2 - q)


def amplitude_ratio(n: int, s: float, p: float) -> float:
    """Gamma ratio ``R(p)`` of the explicit singular solution.

    ``R = G(n/2 - q) G(s + q) / (G(q) G((n-2s)/2 - q))`` with ``q = s/(p-1)``.
    At ``p = p_S`` it equals the Hardy ratio.
    """
    _require_supercritical(n, s, p)
    return _amplitude_ratio(n, s, p)


def singular_amplitude(n: int, s: float, p: float) -> float:
    """Coefficient ``A`` of the singular solution ``A |x|^{-2s/(p-1)}``.

    ``A^{p-1} = 4**s R`` for the operator with Fourier symbol ``|xi|^{2s}``.
    """
    _require_supercritical(n, s, p)
    return (2.0 ** (2 * s) * _amplitude_ratio(n, s, p)) ** (1.0 / (p - 1.0))


def stability_discriminant(n: int, s: float, p: float) -> float:
    """``Phi = p R(p) - H``; positive values give the Liouville property."""
    _require_supercritical(n, s, p)
    return p * _amplitude_ratio(n, s, p) - hardy_ratio(n, s)


def _is_critical(p, ps):
    return math.isfinite(ps) and abs(p - ps) <= CRITICAL_RTOL * ps


def classify(n: int, s: float, p: float) -> StabilityReport:
    """Place ``(n, s, p)`` in the stable-solution classification."""
    params = ProblemParams(n, s, p)
    ps = sobolev_exponent(params.n, params.s)
    if n > 2 * s:
        h = hardy_ratio(n, s)
        lam = 2.0 ** (2 * s) * h
    else:
        h = lam = None
    ratio = amp = phi = None
    if _is_critical(p, ps):
        verdict = Verdict.CRITICAL
    elif p < ps:
        verdict = Verdict.SUBCRITICAL_LIOUVILLE
    else:
        ratio = _amplitude_ratio(n, s, p)
        amp = (2.0 ** (2 * s) * ratio) ** (1.0 / (p - 1.0))
        phi = p * ratio - h
        verdict = Verdict.SUPERCRITICAL_LIOUVILLE if phi > 0 else Verdict.JL_REGIME
    return StabilityReport(
        n=n,
        s=s,
        p=p,
        p_sobolev=ps,
        hardy_ratio=h,
        hardy_constant=lam,
        amplitude_ratio=ratio,
        amplitude=amp,
        phi=phi,
        verdict=verdict,
    )


def joseph_lundgren_exponent(n: int, s: float) -> float:
    """First zero of ``Phi`` in ``(p_S, P_MAX]``, or ``inf`` if there is none.

    ``Phi`` is sampled on a geometric grid of ``SCAN_POINTS`` values from
    ``p_S (1 + 1e-9)`` to ``P_MAX``; the bracketing sign change is refined
    with Brent's method.

    Raises
    ------
    NumericalFailure
        If the scan finds more than one sign change (``Phi`` is assumed to
        cross zero at most once) or the refinement does not converge.
    """
    ps = sobolev_exponent(n, s)
    if not math.isfinite(ps):
        raise DomainError(f"Joseph-Lundgren exponent needs n > 2s, got n={n}, s={s}")
    h = hardy_ratio(n, s)

    def phi(p):
        return p * _amplitude_ratio(n, s, p) - h

    grid = np.geomspace(ps * (1.0 + 1e-9), P_MAX, SCAN_POINTS)
    values = np.array([phi(p) for p in grid])
    crossings = np.nonzero((values[:-1] * values[1:] < 0) | (values[:-1] == 0))[0]
    if len(crossings) == 0:
        return math.inf
    if len(crossings) > 1:
        roots = ", ".join(f"({grid[i]:.6g}, {grid[i + 1]:.6g})" for i in crossings)
        raise NumericalFailure(
            f"discriminant changes sign {len(crossings)} times for n={n}, s={s}: {roots}"
        )
    i = crossings[0]
    if values[i] == 0.0:
        return float(grid[i])
    root, info = brentq(phi, grid[i], grid[i + 1], xtol=1e-300, rtol=1e-14,
                        maxiter=200, full_output=True, disp=False)
    if not info.converged:
        raise NumericalFailure(f"Brent refinement failed: {info.flag}")
    return float(root)


def pc_closed_form_s1(n: int) -> float:
    """Classical Joseph-Lundgren exponent for ``-Delta`` (infinite for n <= 10)."""
    if n <= 10:
        return math.inf
    return ((n - 2) ** 2 - 4 * n + 8 * math.sqrt(n - 1)) / ((n - 2) * (n - 10))


def pc_closed_form_s2(n: int) -> float:
    """Joseph-Lundgren exponent for the bilaplacian (infinite for n <= 12)."""
    if n <= 12:
        return math.inf
    root = math.sqrt(n * n + 4 - n * math.sqrt(n * n - 8 * n + 32))
    return (n + 2 - root) / (n - 6 - root)


def dimension_condition_mono(n: int, s: float, p: float) -> bool:
    """Dimension condition under which the energy ``E`` is monotone."""
    b = 3.0 - 2.0 * s
    threshold = (p + 4 * s - 1) / (p + 2 * s - 1) + 2 * s / (p - 1) - b
    return n > threshold
