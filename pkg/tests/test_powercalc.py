import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclane import DomainError
from fraclane import exponents
from fraclane import powercalc as pc


def mp_gamma_t(n, t, beta):
    mp.mp.dps = 40
    n, t, b = mp.mpf(n), mp.mpf(t), mp.mpf(beta)
    return float(4**t * mp.gamma((n + 2 * t + 2 * b) / 4) * mp.gamma((n + 2 * t - 2 * b) / 4)
                 * mp.rgamma((n - 2 * t - 2 * b) / 4) * mp.rgamma((n - 2 * t + 2 * b) / 4))


def test_anchor_half_order():
    assert pc.gamma_t_beta(5, 0.5, 0.0) == pytest.approx(math.pi / 2, rel=1e-14)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 20), st.floats(0.02, 0.98), st.floats(0.01, 0.99))
def test_gamma_t_against_mpmath(n, t, frac):
    lo, hi = pc.admissible_beta_window(n, t)
    beta = lo + frac * (hi - lo)
    ref = mp_gamma_t(n, t, beta)
    assert pc.gamma_t_beta(n, t, beta) == pytest.approx(ref, rel=1e-11, abs=1e-13)


def test_gamma_t_even():
    for beta in (0.1, 0.7, 1.3):
        assert pc.gamma_t_beta(6, 0.4, beta) == pc.gamma_t_beta(6, 0.4, -beta)


def test_gamma_t_sign_structure():
    n, t = 5, 0.3
    edge = (n - 2 * t) / 2
    assert pc.gamma_t_beta(n, t, 0.0) > 0
    assert abs(pc.gamma_t_beta(n, t, -edge)) < 1e-14
    assert pc.gamma_t_beta(n, t, -edge - 0.1) < 0


def test_window_enforced():
    lo, hi = pc.admissible_beta_window(5, 0.5)
    assert (lo, hi) == (-3.0, 2.0)
    with pytest.raises(DomainError):
        pc.gamma_t_beta(5, 0.5, 2.0)
    with pytest.raises(DomainError):
        pc.gamma_t_beta(5, 0.5, -3.0)
    with pytest.raises(DomainError):
        pc.gamma_t_beta(5, 1.0, 0.0)


def test_laplacian_power():
    out = pc.laplacian_power(3, pc.RadialPower(2.0, Fraction(2)))
    assert out.coefficient == -12.0 and out.exponent == 0
    # the fundamental solution is harmonic
    assert pc.laplacian_power(5, pc.RadialPower(1.0, -3)).coefficient == 0.0


def test_radial_power_helpers():
    f = pc.RadialPower(3.0, -1.5)
    assert f(4.0) == pytest.approx(3.0 / 8.0)
    assert f.scale(2.0).coefficient == 6.0


def test_frac_laplacian_power_composes():
    n, s, e = 7, 1.4, -1.1
    t = s - 1
    beta = e - (2 * t - n) / 2
    inner = pc.gamma_t_beta(n, t, beta)
    eta = e - 2 * t
    expected = inner * (-eta * (n + eta - 2))
    out = pc.frac_laplacian_power(n, s, pc.RadialPower(1.0, e))
    assert out.coefficient == pytest.approx(expected, rel=1e-14)
    assert out.exponent == Fraction(e) - 2 * Fraction(s)


def test_frac_laplacian_power_zero_input():
    out = pc.frac_laplacian_power(5, 1.5, pc.RadialPower(0.0, -1.0))
    assert out.coefficient == 0.0 and out.exponent == -4


def test_frac_laplacian_power_order_range():
    with pytest.raises(DomainError):
        pc.frac_laplacian_power(5, 0.5, pc.RadialPower(1.0, -1.0))


def test_fraclap_constant():
    # c_{3,1/2} = 1/pi^2
    assert pc.fraclap_constant(3, 0.5) == pytest.approx(1 / math.pi**2, rel=1e-14)
    mp.mp.dps = 30
    ref = 4**mp.mpf("0.3") * mp.gamma(mp.mpf("2.8")) / (mp.pi**2.5 * abs(mp.gamma(mp.mpf("-0.3"))))
    assert pc.fraclap_constant(5, 0.3) == pytest.approx(float(ref), rel=1e-13)


@pytest.mark.parametrize("n,t,frac", [(1, 0.3, 0.6), (3, 0.5, 0.3), (4, 0.8, 0.5), (9, 0.2, 0.9)])
def test_quadrature_oracle_matches(n, t, frac):
    lo, hi = pc.admissible_beta_window(n, t)
    beta = lo + frac * (hi - lo)
    e = (2 * t - n) / 2 + beta
    got = pc.quadrature_fraclap_oracle(n, t, e)
    assert got == pytest.approx(pc.gamma_t_beta(n, t, beta), rel=1e-9)


def test_quadrature_oracle_domain():
    with pytest.raises(DomainError):
        pc.quadrature_fraclap_oracle(5, 0.5, 10.0)
    with pytest.raises(DomainError):
        pc.quadrature_fraclap_oracle(0, 0.5, 0.0)


def test_singular_solution_equation():
    c = pc.verify_singular_solution(5, 1.5, 5.0)
    assert c.passed
    assert c.expected_exponent == Fraction(-15, 4)
    assert c.output.coefficient == pytest.approx(c.amplitude**5, rel=1e-12)


def test_singular_solution_domain():
    with pytest.raises(DomainError):
        pc.verify_singular_solution(5, 1.5, 3.0)
    with pytest.raises(DomainError):
        pc.verify_singular_solution(5, 1.0, 5.0)


@pytest.mark.parametrize("n", [12, 20])
@pytest.mark.parametrize("s", [1.05, 1.95])
def test_singular_solution_large_p(n, s):
    ps = exponents.sobolev_exponent(n, s)
    for p in (ps * 1.001, 2 * ps, 50 * ps):
        assert pc.verify_singular_solution(n, s, p).passed
