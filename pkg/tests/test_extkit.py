import math

import mpmath as mp
import numpy as np
import pytest

from fraclane import DomainError
from fraclane import extkit as ek


def bessel_profile(xi, s, y):
    mp.mp.dps = 25
    z = xi * y
    return float(z**s * mp.besselk(s, z) / (2 ** (s - 1) * mp.gamma(s)))


@pytest.mark.parametrize("s", [1.2, 1.5, 1.8])
def test_profile_matches_bessel(s):
    xi = 0.7
    pr = ek.solve_extension_profile(xi, s)
    for y, p in list(zip(pr.y_grid, pr.phi))[::9]:
        assert p == pytest.approx(bessel_profile(xi, s, y), abs=1e-11)


def test_half_order_profile_is_elementary():
    xi = 1.3
    pr = ek.solve_extension_profile(xi, 1.5)
    y = pr.y_grid
    assert np.abs(pr.phi - (1 + xi * y) * np.exp(-xi * y)).max() < 1e-11
    assert np.abs(pr.chi + 2 * xi**2 * np.exp(-xi * y)).max() < 1e-10
    assert pr.multiplier == pytest.approx(2 * xi**3, rel=1e-10)


@pytest.mark.parametrize("s", [1.05, 1.3, 1.7, 1.95])
def test_multiplier_matches_closed_form(s):
    for xi in (0.25, 1.0, 4.0):
        m = ek.extract_dtn_multiplier(ek.solve_extension_profile(xi, s))
        assert m == pytest.approx(ek.dtn_multiplier_closed_form(xi, s), rel=1e-9)


def test_multiplier_homogeneity():
    s, lam = 1.37, 2.5
    m1 = ek.solve_extension_profile(0.8, s).multiplier
    m2 = ek.solve_extension_profile(0.8 * lam, s).multiplier
    assert m2 / m1 == pytest.approx(lam ** (2 * s), rel=1e-4)


def test_profile_scales_with_frequency():
    a = ek.solve_extension_profile(0.5, 1.4)
    b = ek.solve_extension_profile(2.0, 1.4)
    np.testing.assert_allclose(a.y_grid * 0.5, b.y_grid * 2.0, rtol=1e-14)
    np.testing.assert_allclose(a.phi, b.phi, atol=1e-11)


def test_profile_trace_and_decay():
    pr = ek.solve_extension_profile(1.0, 1.6)
    assert pr.phi[0] == pytest.approx(1.0, abs=1e-6)
    assert abs(pr.phi[-1]) < 1e-15
    assert pr.residual <= ek.RESIDUAL_TOL


@pytest.mark.parametrize("s", [1.2, 1.5, 1.8])
def test_neumann_flux_vanishes(s):
    pr = ek.solve_extension_profile(1.0, s)
    assert pr.neumann_slope > 0
    assert pr.neumann_slope == pytest.approx(4 - 2 * s, abs=0.15)


def test_tight_grid_config_still_converges():
    cfg = ek.GridConfig(y_max=30.0, n_points=120)
    pr = ek.solve_extension_profile(1.0, 1.25, cfg)
    assert pr.y_grid.size == 120
    assert pr.multiplier == pytest.approx(ek.dtn_multiplier_closed_form(1.0, 1.25), rel=1e-9)


@pytest.mark.parametrize("xi,s", [(0.0, 1.5), (-1.0, 1.5), (math.inf, 1.5), (1.0, 1.0), (1.0, 2.0)])
def test_profile_domain(xi, s):
    with pytest.raises(DomainError):
        ek.solve_extension_profile(xi, s)


def test_symbol_fit():
    xs = [0.25, 0.5, 1.0, 2.0, 4.0]
    k, c = ek.fit_symbol_exponent([(x, 3.0 * x**2.6) for x in xs])
    assert k == pytest.approx(2.6, abs=1e-12)
    assert c == pytest.approx(3.0, rel=1e-12)


@pytest.mark.parametrize("pairs", [
    [(1.0, 1.0)] * 6,
    [(1.0, 1.0), (2.0, 4.0), (3.0, 9.0), (4.0, 16.0)],
    [(0.25, 1.0), (1.0, 1.0), (2.0, 1.0), (4.0, -1.0)],
])
def test_symbol_fit_rejects(pairs):
    with pytest.raises(DomainError):
        ek.fit_symbol_exponent(pairs)


def test_delta_b_on_polynomials():
    b = 0.4
    pt = np.array([0.3, -0.2, 0.7])
    assert ek.delta_b_fd(lambda X: X[0], pt, 1e-3, b) == pytest.approx(0.0, abs=1e-9)
    # Delta_b y^2 = 2 + 2b
    assert ek.delta_b_fd(lambda X: X[-1] ** 2, pt, 1e-3, b) == pytest.approx(2 + 2 * b, rel=1e-8)
    # Delta_b y^(1-b) = 0
    assert ek.delta_b_fd(lambda X: X[-1] ** (1 - b), pt, 1e-4, b) == pytest.approx(0.0, abs=1e-6)


def test_delta_b_needs_positive_height():
    with pytest.raises(DomainError):
        ek.delta_b_fd(lambda X: 1.0, [0.0, 0.005], 1e-2, 0.0)


def test_gradient_fd():
    g = ek.gradient_fd(lambda X: X[0] ** 2 + 3 * X[1], [1.0, 2.0], 1e-4)
    np.testing.assert_allclose(g, [2.0, 3.0], rtol=1e-8)


def test_identities_hold_exactly_for_constants():
    rep = ek.check_product_identities(lambda X: 2.0, lambda X: -1.5, [[0.1, 0.5]], 1e-2, 0.3)
    assert rep.first == 0.0 and rep.second == 0.0


def test_identity_orders_are_two():
    rng = np.random.default_rng(7)
    pts = [np.array([0.2, -0.1, 0.8]), np.array([-0.4, 0.3, 1.1])]
    orders, reports = ek.identity_convergence_order(
        ek.random_smooth_field(rng, 3), ek.random_smooth_field(rng, 3), pts, b=-0.2)
    assert orders[0] == pytest.approx(2.0, abs=0.2)
    assert orders[1] == pytest.approx(2.0, abs=0.2)
    assert reports[0].first > reports[-1].first
