"""Monotonicity functional ``E(r, x0, u_e)`` for the degenerate extension.

With ``a = 2s/(p-1)``, ``b = 3 - 2s`` and half-balls ``B_r^+`` centred at
``(x0, 0)`` in ``R^(n+1)_+``, the functional is the sum of six terms::

    T1 = r^(2a+2s-n) [ 1/2 int_{B_r^+} y^b |Delta_b u|^2 - C/(p+1) int_{B_r, y=0} |u|^(p+1) ]
    T2 = -k r^(2a+2s-3-n) int_{dB_r^+} y^b u^2
    T3 = -k d/dr [ r^(2a+2s-2-n) int_{dB_r^+} y^b u^2 ]
    T4 = 1/2 r^3 d/dr [ r^(2a+2s-3-n) int_{dB_r^+} y^b (a u/r + u_r)^2 ]
    T5 = 1/2 d/dr [ r^(2a+2s-n) int_{dB_r^+} y^b (|grad u|^2 - u_r^2) ]
    T6 = 1/2 r^(2a+2s-n-1) int_{dB_r^+} y^b (|grad u|^2 - u_r^2)

where ``k = s/(p-1) ((p+2s-1)/(p-1) - n)``. Every term is invariant under
``(r, u) -> (r/lam, u^lam)`` with ``u^lam(X) = lam^a u(lam X)``.

Quadrature is in polar coordinates ``X = rho (sqrt(1-tau^2) sigma, tau)``.
The ``tau`` rule carries the weight ``tau^b (1-tau^2)^((n-2)/2)``, the
radial rule ``rho^(n+b)`` on geometrically graded panels. For
axisymmetric fields centred at the origin the ``sigma`` integral collapses
to ``|S^(n-1)|``; otherwise explicit sphere rules are available for
``n <= 3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from . import exponents
from ._folded import sphere_area
from .errors import DomainError, NumericalFailure

__all__ = [
    "QuadConfig",
    "HalfSpaceField",
    "EnergyBreakdown",
    "energy_E",
    "rescale_field",
    "scale_invariance_residual",
    "homogeneity_defect",
    "mono_constants",
    "zero_field",
    "gaussian_field",
    "homogeneous_field",
    "bump_field",
    "sampled_field",
    "superpose",
    "builtin_field",
    "BUILTIN_FIELDS",
]


@dataclass(frozen=True)
class QuadConfig:
    radial_panels: int = 24  # geometric panels of ratio 4 below r
    radial_nodes: int = 12
    polar_nodes: int = 32
    azimuth_nodes: int = 24  # general path only
    h_r: float = 1e-4  # relative step for d/dr


# ------------------------------------------------------------------ fields

Jet = Callable[[np.ndarray], tuple]


@dataclass(frozen=True)
class HalfSpaceField:
    """A function ``u_e`` on ``R^(n+1)_+`` with its first derivatives and ``Delta_b u_e``.

    ``jet(P)`` maps points ``P`` of shape ``(m, n+1)`` (last column ``y >= 0``)
    to ``(u, grad, delta_b_u, euler)`` with ``euler = P . grad``.
    ``axisymmetric`` promises dependence on ``(|x|, y)`` only.
    """

    n: int
    s: float
    p: float
    jet: Jet = field(repr=False, compare=False)
    axisymmetric: bool = False
    name: str = "custom"
    smooth: bool = True

    def __post_init__(self):
        exponents.ProblemParams(self.n, self.s, self.p)
        if not 1.0 < self.s < 2.0:
            raise DomainError(f"order s must lie in (1, 2), got {self.s!r}")

    @property
    def a(self) -> float:
        return 2.0 * self.s / (self.p - 1.0)

    @property
    def b(self) -> float:
        return 3.0 - 2.0 * self.s

    def __call__(self, P) -> np.ndarray:
        P = np.atleast_2d(np.asarray(P, dtype=float))
        return self.jet(P)[0]


def _norm(P):
    return np.sqrt(np.einsum("ij,ij->i", P, P))


def zero_field(n, s, p) -> HalfSpaceField:
    def jet(P):
        z = np.zeros(len(P))
        return z, np.zeros_like(P), z.copy(), z.copy()

    return HalfSpaceField(n, s, p, jet, axisymmetric=True, name="zero")


def gaussian_field(n, s, p, cx: float = 1.0, cy: float = 1.0, shift=None) -> HalfSpaceField:
    """``exp(-cx |x - shift|^2 - cy y^2)``."""
    b = 3.0 - 2.0 * s
    sh = np.zeros(n) if shift is None else np.asarray(shift, dtype=float)
    if sh.shape != (n,):
        raise DomainError(f"shift must have {n} components")

    def jet(P):
        x = P[:, :n] - sh
        y = P[:, n]
        x2 = np.einsum("ij,ij->i", x, x)
        u = np.exp(-cx * x2 - cy * y * y)
        grad = np.empty_like(P)
        grad[:, :n] = -2.0 * cx * x * u[:, None]
        grad[:, n] = -2.0 * cy * y * u
        lap_b = (4 * cx * cx * x2 - 2 * n * cx + 4 * cy * cy * y * y - 2 * cy * (1 + b)) * u
        return u, grad, lap_b, np.einsum("ij,ij->i", P, grad)

    return HalfSpaceField(n, s, p, jet, axisymmetric=not np.any(sh), name="gaussian")


def homogeneous_field(n, s, p, q: Optional[float] = None) -> HalfSpaceField:
    """``|X|^q``; the default ``q = -2s/(p-1)`` is the blow-down homogeneity."""
    b = 3.0 - 2.0 * s
    if q is None:
        q = -2.0 * s / (p - 1.0)

    def jet(P):
        rho2 = np.einsum("ij,ij->i", P, P)
        u = rho2 ** (0.5 * q)
        g = q * u / rho2
        return u, g[:, None] * P, q * (q + n - 1 + b) * u / rho2, q * u

    return HalfSpaceField(n, s, p, jet, axisymmetric=True, name=f"homogeneous({q!r})")


def bump_field(n, s, p, radius: float = 1.0) -> HalfSpaceField:
    """``exp(1 - 1/(1 - |X|^2/R^2))`` inside ``|X| < R``, zero outside."""
    b = 3.0 - 2.0 * s
    R2 = radius * radius

    def jet(P):
        rho2 = np.einsum("ij,ij->i", P, P) / R2
        inside = rho2 < 1.0
        w = np.where(inside, 1.0 - rho2, 1.0)
        g = np.where(inside, np.exp(1.0 - 1.0 / w), 0.0)
        # g'(rho)/rho and g''(rho) in the unscaled variable
        g1 = -2.0 * g / (w * w) / R2
        g2 = g1 + (4.0 * rho2 * g / w**4 - 8.0 * rho2 * g / w**3) / R2
        grad = g1[:, None] * P
        lap_b = g2 + (n + b) * g1
        return g, grad, lap_b, g1 * rho2 * R2

    return HalfSpaceField(n, s, p, jet, axisymmetric=True, name="bump")


def sampled_field(n, s, p, sampler, axisymmetric=False, step: float = 1e-4) -> HalfSpaceField:
    """Wrap a plain sampler ``u(P)``; derivatives by central differences.

    The sampler is evaluated at ``|y|`` (even reflection), so it should have
    ``u_y = 0`` on ``y = 0`` for ``Delta_b u`` to stay bounded.
    """
    b = 3.0 - 2.0 * s

    def ev(Q):
        Q = Q.copy()
        Q[:, n] = np.abs(Q[:, n])
        return np.asarray(sampler(Q), dtype=float)

    def jet(P):
        h = step * np.maximum(_norm(P), 1.0)
        u = ev(P)
        grad = np.empty_like(P)
        lap = np.zeros(len(P))
        for i in range(n + 1):
            E = np.zeros_like(P)
            E[:, i] = h
            up, um = ev(P + E), ev(P - E)
            grad[:, i] = (up - um) / (2 * h)
            lap += (up - 2 * u + um) / (h * h)
        y = P[:, n]
        uy = grad[:, n]
        lap_b = lap + b * np.divide(uy, y, out=np.zeros_like(uy), where=y > 0)
        return u, grad, lap_b, np.einsum("ij,ij->i", P, grad)

    return HalfSpaceField(n, s, p, jet, axisymmetric=axisymmetric, name="sampled")


BUILTIN_FIELDS = ("zero", "gaussian", "homogeneous", "bump")


def builtin_field(name: str, n: int, s: float, p: float, q: Optional[float] = None) -> HalfSpaceField:
    if name == "zero":
        return zero_field(n, s, p)
    if name == "gaussian":
        return gaussian_field(n, s, p)
    if name == "homogeneous":
        return homogeneous_field(n, s, p, q)
    if name == "bump":
        return bump_field(n, s, p)
    raise DomainError(f"unknown field {name!r}; choose from {', '.join(BUILTIN_FIELDS)}")


def rescale_field(f: HalfSpaceField, lam: float) -> HalfSpaceField:
    """``X -> lam^a u(lam X)`` with ``a = 2s/(p-1)``."""
    if not lam > 0:
        raise DomainError(f"scale factor must be positive, got {lam!r}")
    if lam == 1.0:
        return f
    a = f.a
    c0 = lam**a
    c1 = c0 * lam
    c2 = c1 * lam

    def jet(P):
        u, g, lb, eu = f.jet(lam * P)
        return c0 * u, c1 * g, c2 * lb, c0 * eu

    return HalfSpaceField(f.n, f.s, f.p, jet, axisymmetric=f.axisymmetric,
                          name=f"{f.name}^{lam!r}", smooth=f.smooth)


# ------------------------------------------------------------------ quadrature

@lru_cache(maxsize=None)
def _gj(m, alpha, beta):
    return roots_jacobi(m, alpha, beta)


@lru_cache(maxsize=None)
def _gl(m):
    return roots_legendre(m)


def _radial_rule(r, power, cfg):
    """Nodes/weights for ``int_0^r rho^power f(rho) drho``."""
    x, w = _gl(cfg.radial_nodes)
    nodes, weights = [], []
    hi = r
    for _ in range(cfg.radial_panels):
        lo = hi / 4.0
        half = 0.5 * (hi - lo)
        t = lo + half * (x + 1.0)
        nodes.append(t)
        weights.append(half * w * t**power)
        hi = lo
    xj, wj = _gj(cfg.radial_nodes, 0.0, power)
    half = 0.5 * hi
    nodes.append(half * (xj + 1.0))
    weights.append(half ** (1.0 + power) * wj)
    return np.concatenate(nodes), np.concatenate(weights)


def _polar_rule(n, b, m):
    """Nodes/weights on ``[0, 1]`` for the weight ``tau^b (1 - tau^2)^((n-2)/2)``."""
    e = 0.5 * (n - 2)
    x, w = _gj(m, e, b)
    tau = 0.5 * (1.0 + x)
    # (1-x)^e (1+x)^b = 2^(e+b) (1-tau)^e tau^b; the (1+tau)^e factor is smooth
    wt = w * (1.0 + tau) ** e / 2.0 ** (e + b + 1.0)
    return tau, wt


@lru_cache(maxsize=None)
def _sphere_rule(n, m, fast):
    """Directions ``sigma`` on ``S^(n-1)`` with weights summing to its area."""
    area = sphere_area(n - 1)
    if fast:
        e1 = np.zeros((1, n))
        e1[0, 0] = 1.0
        return e1, np.array([area])
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    phi = 2 * math.pi * (np.arange(2 * m) + 0.5) / (2 * m)
    if n == 2:
        return np.column_stack([np.cos(phi), np.sin(phi)]), np.full(2 * m, math.pi / m)
    if n == 3:
        c, wc = _gl(m)
        sn = np.sqrt(1.0 - c * c)
        dirs = np.array([[sk * math.cos(f), sk * math.sin(f), ck]
                         for ck, sk in zip(c, sn) for f in phi])
        wts = np.array([wk * math.pi / m for wk in wc for _ in phi])
        return dirs, wts
    raise DomainError(
        f"fields without axial symmetry about the centre are supported for n <= 3, got n={n}"
    )


class _Integrator:
    def __init__(self, f: HalfSpaceField, center, cfg: QuadConfig):
        self.f = f
        self.n = f.n
        self.b = f.b
        self.cfg = cfg
        c = np.zeros(self.n) if center is None else np.asarray(center, dtype=float)
        if c.shape != (self.n,):
            raise DomainError(f"centre must have {self.n} components")
        self.c = np.concatenate([c, [0.0]])
        fast = f.axisymmetric and not np.any(c)
        self.sig, self.wsig = _sphere_rule(self.n, cfg.azimuth_nodes // 2, fast)
        self.tau, self.wtau = _polar_rule(self.n, self.b, cfg.polar_nodes)
        ct = np.sqrt(1.0 - self.tau**2)
        # unit directions on the upper hemisphere, shape (k_tau * k_sig, n+1)
        om = np.concatenate(
            [ct[:, None, None] * self.sig[None, :, :],
             np.broadcast_to(self.tau[:, None, None], (len(self.tau), len(self.sig), 1))],
            axis=2,
        )
        self.omega = om.reshape(-1, self.n + 1)
        self.wom = (self.wtau[:, None] * self.wsig[None, :]).ravel()

    def _jet(self, P):
        out = self.f.jet(P)
        if any(not np.all(np.isfinite(v)) for v in out):
            raise NumericalFailure(f"field {self.f.name!r} is not finite at a quadrature node")
        u, g, lb, eu = out
        if np.any(self.c):
            eu = np.einsum("ij,ij->i", P - self.c, g)
        return u, g, lb, eu

    def sphere_terms(self, r):
        """``int_{dB_r^+} y^b (u^2, (a u + X.grad u)^2 / r^2, |grad u|^2 - u_r^2) dS``."""
        P = self.c + r * self.omega
        u, g, _, eu = self._jet(P)
        meas = r ** (self.n + self.b) * self.wom
        ur = eu / r
        defect = (self.f.a * u + eu) / r
        tang = np.einsum("ij,ij->i", g, g) - ur * ur
        return meas @ (u * u), meas @ (defect * defect), meas @ tang

    def bulk(self, r):
        rho, wr = _radial_rule(r, self.n + self.b, self.cfg)
        P = self.c + (rho[:, None, None] * self.omega[None, :, :]).reshape(-1, self.n + 1)
        _, _, lb, _ = self._jet(P)
        vals = (lb * lb).reshape(len(rho), -1) @ self.wom
        return float(wr @ vals)

    def boundary(self, r, power):
        rho, wr = _radial_rule(r, self.n - 1, self.cfg)
        sig = np.concatenate([self.sig, np.zeros((len(self.sig), 1))], axis=1)
        P = self.c + (rho[:, None, None] * sig[None, :, :]).reshape(-1, self.n + 1)
        u = self._jet(P)[0]
        vals = (np.abs(u) ** power).reshape(len(rho), -1) @ self.wsig
        return float(wr @ vals)


def _ddr(F, r, h):
    """Central difference in ``r`` with one Richardson step."""
    d1 = (F(r + h) - F(r - h)) / (2 * h)
    d2 = (F(r + h / 2) - F(r - h / 2)) / h
    return (4 * d2 - d1) / 3


def mono_constants(n, s, p) -> tuple[float, float]:
    """``(alpha_mono, beta_mono)`` from the derivative of ``E``."""
    b = 3.0 - 2.0 * s
    alpha = n + b - 4 * s / (p - 1)
    beta = 2 * s / (p - 1) * ((p + 2 * s - 1) / (p - 1) - n - b)
    return alpha, beta


@dataclass(frozen=True)
class EnergyBreakdown:
    T1: float
    T2: float
    T3: float
    T4: float
    T5: float
    T6: float
    alpha_mono: float
    beta_mono: float

    @property
    def total(self) -> float:
        return self.T1 + self.T2 + self.T3 + self.T4 + self.T5 + self.T6

    @property
    def terms(self) -> tuple:
        return (self.T1, self.T2, self.T3, self.T4, self.T5, self.T6)

    @property
    def mono_condition(self) -> bool:
        return self.alpha_mono - self.beta_mono - 1.0 > 0.0


def energy_E(
    field: HalfSpaceField,
    center=None,
    r: float = 1.0,
    quad_config: Optional[QuadConfig] = None,
    boundary_constant: float = 1.0,
) -> EnergyBreakdown:
    """Evaluate the six terms of ``E(r, center, u_e)``.

    Raises
    ------
    DomainError
        For ``r <= 0`` or unsupported geometry.
    NumericalFailure
        If the field is not finite at a quadrature node.
    """
    if not (r > 0 and math.isfinite(r)):
        raise DomainError(f"radius must be positive, got {r!r}")
    cfg = quad_config or QuadConfig()
    n, s, p = field.n, field.s, field.p
    a = field.a
    I = _Integrator(field, center, cfg)
    k = s / (p - 1) * ((p + 2 * s - 1) / (p - 1) - n)
    e0 = 2 * a + 2 * s - n
    h = cfg.h_r * r

    cache = {}

    def sph(rr):
        if rr not in cache:
            cache[rr] = I.sphere_terms(rr)
        return cache[rr]

    t1 = r**e0 * (0.5 * I.bulk(r) - boundary_constant / (p + 1) * I.boundary(r, p + 1))
    t2 = -k * r ** (e0 - 3) * sph(r)[0]
    t3 = -k * _ddr(lambda x: x ** (e0 - 2) * sph(x)[0], r, h)
    t4 = 0.5 * r**3 * _ddr(lambda x: x ** (e0 - 3) * sph(x)[1], r, h)
    t5 = 0.5 * _ddr(lambda x: x**e0 * sph(x)[2], r, h)
    t6 = 0.5 * r ** (e0 - 1) * sph(r)[2]
    al, be = mono_constants(n, s, p)
    return EnergyBreakdown(*(float(t) for t in (t1, t2, t3, t4, t5, t6)), al, be)


def scale_invariance_residual(field: HalfSpaceField, lam: float, r: float,
                              quad_config: Optional[QuadConfig] = None) -> float:
    """``|E(u, lam r) - E(u^lam, r)| / (1 + |E(u, lam r)|)``."""
    e_big = energy_E(field, None, lam * r, quad_config).total
    e_small = energy_E(rescale_field(field, lam), None, r, quad_config).total
    return abs(e_big - e_small) / (1.0 + abs(e_big))


def homogeneity_defect(field: HalfSpaceField, r: float, center=None,
                       quad_config: Optional[QuadConfig] = None) -> float:
    """``int_{dB_r^+} y^b (a u/r + u_r)^2``; zero for fields homogeneous of degree ``-a``."""
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    return float(_Integrator(field, center, quad_config or QuadConfig()).sphere_terms(r)[1])


def superpose(f: HalfSpaceField, g: HalfSpaceField, c: float = 1.0) -> HalfSpaceField:
    """``u_f + c u_g`` for two fields with the same parameters."""
    if (f.n, f.s, f.p) != (g.n, g.s, g.p):
        raise DomainError("fields must share (n, s, p)")

    def jet(P):
        a, b = f.jet(P), g.jet(P)
        return tuple(x + c * y for x, y in zip(a, b))

    return HalfSpaceField(f.n, f.s, f.p, jet, axisymmetric=f.axisymmetric and g.axisymmetric,
                          name=f"{f.name}+{c!r}*{g.name}", smooth=f.smooth and g.smooth)
