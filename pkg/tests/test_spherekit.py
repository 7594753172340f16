import math

import mpmath as mp
import numpy as np
import pytest

from fraclane import DomainError, exponents, powercalc
from fraclane import spherekit as sk


def K(n, s, alpha, mu):
    return sk.kernel_K(sk.KernelParams(n, s, alpha, mu))


def dK(n, s, alpha, mu):
    return sk.kernel_alpha_derivative(sk.KernelParams(n, s, alpha, mu))


def mp_K(n, s, alpha, mu):
    mp.mp.dps = 25
    n, s, alpha, mu = (mp.mpf(v) for v in (n, s, alpha, mu))
    f = lambda t: (t ** (n - 1 - alpha) + t ** (2 * s - 1 + alpha)) * (t * t + 1 - 2 * t * mu) ** (-(n + 2 * s) / 2)
    # t = u^10 tames the endpoint power singularity
    return float(mp.quad(lambda u: f(u**10) * 10 * u**9, [0, 0.5, 1]))


def test_anchor():
    assert K(5, 1.5, 0.0, 0.0) == pytest.approx(math.pi / 32, abs=1e-12)


@pytest.mark.parametrize("n,s,alpha,mu", [(3, 0.5, 0.2, -0.7), (6, 1.2, 1.0, 0.3),
                                          (9, 1.9, 2.5, 0.8), (4, 0.1, -0.1, -1.0)])
def test_kernel_against_mpmath(n, s, alpha, mu):
    assert K(n, s, alpha, mu) == pytest.approx(mp_K(n, s, alpha, mu), rel=1e-10)


def test_symmetry_about_hardy_homogeneity():
    n, s = 7, 1.3
    c = (n - 2 * s) / 2
    for d in (0.2, 0.9, 1.4):
        for mu in (-0.5, 0.6):
            assert K(n, s, c - d, mu) == pytest.approx(K(n, s, c + d, mu), rel=1e-11)


def test_derivative_zero_at_center():
    assert abs(dK(7, 1.3, (7 - 2.6) / 2, 0.2)) < 1e-14


def test_derivative_matches_finite_difference():
    h = 1e-4
    fd = (K(6, 1.4, 1.1 + h, 0.4) - K(6, 1.4, 1.1 - h, 0.4)) / (2 * h)
    assert dK(6, 1.4, 1.1, 0.4) == pytest.approx(fd, rel=1e-7)


def test_monotone_below_center_on_grid():
    n, s = 5, 1.5
    c = (n - 2 * s) / 2
    for alpha in np.linspace(-2 * s + 0.05, c - 0.05, 10):
        for mu in np.linspace(-1.0, 0.9, 10):
            assert dK(n, s, alpha, mu) < 0
            assert dK(n, s, n - 2 * s - alpha, mu) > 0


def test_comparison_supercritical():
    mus = np.linspace(-1.0, 0.9, 12)
    for n, s, p in [(5, 1.5, 5.0), (10, 0.4, 2.0), (8, 1.9, 30.0)]:
        r = sk.kernel_comparison(n, s, p, mus)
        assert r.passed and r.min_margin > 0
        assert r.alpha_solution < r.alpha_hardy


def test_comparison_at_sobolev_is_equality():
    ps = exponents.sobolev_exponent(5, 1.5)
    r = sk.kernel_comparison(5, 1.5, ps, [-0.5, 0.0, 0.5])
    assert max(abs(m) for m in r.margins) < 1e-12
    assert not r.passed


def test_comparison_persists_below_sobolev():
    # alpha = 2s/(p-1) is then above the center, and symmetry keeps the margin positive
    r = sk.kernel_comparison(5, 1.5, 3.0, np.linspace(-1, 0.9, 8))
    assert r.passed


def test_comparison_needs_n_above_2s():
    with pytest.raises(DomainError):
        sk.kernel_comparison(3, 1.5, 5.0, [0.0])


@pytest.mark.parametrize("n,s,alpha,mu", [(1, 1.0, 0.0, 0.0), (5, 0.0, 0.0, 0.0), (5, 2.0, 0.0, 0.0),
                                          (5, 1.5, 5.0, 0.0), (5, 1.5, -3.0, 0.0), (5, 1.5, 0.0, 1.0),
                                          (5, 1.5, 0.0, -1.1), (5.5, 1.5, 0.0, 0.0)])
def test_kernel_params_rejected(n, s, alpha, mu):
    with pytest.raises(DomainError):
        sk.KernelParams(n, s, alpha, mu)


def test_kernel_accepts_all_orders():
    for s in (0.05, 0.5, 1.0, 1.5, 1.95):
        assert K(6, s, 0.5, 0.0) > 0


def test_kernel_near_pole_is_large_and_finite():
    v = K(5, 1.5, 0.0, 1 - 1e-6)
    assert math.isfinite(v) and v > K(5, 1.5, 0.0, 0.9)


def test_regularized_divergence_exponent():
    r = sk.regularized_constant(5, 1.5, 1.0, 0.01)
    g, c1 = r.divergence_fit
    assert g == pytest.approx(-0.5, abs=1e-3)
    assert c1 > 0
    assert r.value == pytest.approx(r.ladder_values[4])


def test_regularized_coefficient_ratio():
    n, s = 5, 1.5
    a, b = 1.0, 0.5
    c1 = sk.regularized_constant(n, s, a, 0.01).divergence_fit[1]
    c2 = sk.regularized_constant(n, s, b, 0.01).divergence_fit[1]
    assert c1 / c2 == pytest.approx(a * (n - 2 * s - a) / (b * (n - 2 * s - b)), rel=1e-3)


def test_regularized_convergent_limit():
    # for s < 1 the limit times c_{n,s} is the multiplier on |x|^-a
    n, s, a = 5, 0.5, 1.0
    r = sk.regularized_constant(n, s, a, 0.01)
    assert r.divergence_fit is None
    ref = powercalc.gamma_t_beta(n, s, (n - 2 * s) / 2 - a)
    assert r.limit_estimate * powercalc.fraclap_constant(n, s) == pytest.approx(ref, rel=1e-4)


def test_regularized_without_ladder():
    r = sk.regularized_constant(5, 1.5, 1.0, 0.05, ladder=None)
    assert r.divergence_fit is None and r.limit_estimate is None and r.ladder == ()


@pytest.mark.parametrize("args", [(5, 1.0, 1.0, 0.01), (5, 1.5, 0.0, 0.01), (5, 1.5, 5.0, 0.01),
                                  (5, 1.5, 1.0, 1e-5), (5, 1.5, 1.0, 0.6), (1, 1.5, 0.5, 0.01)])
def test_regularized_domain(args):
    with pytest.raises(DomainError):
        sk.regularized_constant(*args, ladder=None)
