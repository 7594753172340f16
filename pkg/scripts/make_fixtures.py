#!/usr/bin/env python3
"""Regenerate src/fraclane/data/oracle_fixtures.txt.

Reference values come from mpmath at 40 digits and from sympy; nothing
here calls the numerical routines of the package. Run from the repo root:

    python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import pathlib
import sys

import mpmath as mp
import sympy as sp

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))
from fraclane.fixtures import (  # noqa: E402  (file format helpers only)
    POLYNOMIALS,
    VERDICT_CODES,
    OracleFixture,
    format_fixture_line,
)

mp.mp.dps = 40
OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "fraclane" / "data" / "oracle_fixtures.txt"

G = mp.gamma


def R(n, s, p):
    q = mp.mpf(s) / (p - 1)
    return G(mp.mpf(n) / 2 - q) * G(s + q) / (G(q) * G(mp.mpf(n - 2 * s) / 2 - q))


def H(n, s):
    return (G(mp.mpf(n + 2 * s) / 4) / G(mp.mpf(n - 2 * s) / 4)) ** 2


def phi(n, s, p):
    return p * R(n, s, p) - H(n, s)


def pc1(n):
    n = mp.mpf(n)
    return ((n - 2) ** 2 - 4 * n + 8 * mp.sqrt(n - 1)) / ((n - 2) * (n - 10))


def pc2(n):
    n = mp.mpf(n)
    root = mp.sqrt(n * n + 4 - n * mp.sqrt(n * n - 8 * n + 32))
    return (n + 2 - root) / (n - 6 - root)


def gamma_t(n, t, beta):
    n, t, beta = mp.mpf(n), mp.mpf(t), mp.mpf(beta)
    return 4**t * G((n + 2 * t + 2 * beta) / 4) * G((n + 2 * t - 2 * beta) / 4) / (
        G((n - 2 * t - 2 * beta) / 4) * G((n - 2 * t + 2 * beta) / 4))


def K(n, s, a, mu):
    n, s, a, mu = (mp.mpf(v) for v in (n, s, a, mu))
    q = (n + 2 * s) / 2
    f = lambda t: (t ** (n - 1 - a) + t ** (2 * s - 1 + a)) * (t * t + 1 - 2 * t * mu) ** (-q)
    return mp.quad(f, [0, mp.mpf(1) / 2, 1])


def dK(n, s, a, mu):
    n, s, a, mu = (mp.mpf(v) for v in (n, s, a, mu))
    q = (n + 2 * s) / 2
    f = lambda t: mp.log(t) * (t ** (2 * s - 1 + a) - t ** (n - 1 - a)) * (t * t + 1 - 2 * t * mu) ** (-q)
    return mp.quad(f, [0, mp.mpf(1) / 2, 1])


def fraclap_c(n, t):
    n, t = mp.mpf(n), mp.mpf(t)
    return 4**t * G(n / 2 + t) / (mp.pi ** (n / 2) * abs(G(-t)))


FIXTURES: list[OracleFixture] = []


def add(fid, inputs, expected, tol, note):
    FIXTURES.append(OracleFixture(fid, inputs, float(expected), float(tol), note))


def build():
    # gammakit
    add("gamma_half", {"op": "gamma", "x": 0.5}, mp.sqrt(mp.pi), 1e-13, "sqrt(pi)")
    add("gamma_ratio_2.125_0.375", {"op": "gamma_ratio", "a": 2.125, "b": 0.375},
        G(mp.mpf("2.125")) / G(mp.mpf("0.375")), 1e-12, "mpmath gamma, 40 digits")

    # exponents
    add("hardy_n5_s1.5", {"op": "hardy_constant", "n": 5, "s": 1.5}, 8 / mp.pi, 1e-12,
        "4^s G(2)^2/G(1/2)^2 = 8/pi")
    add("hardy_n5_s1", {"op": "hardy_constant", "n": 5, "s": 1.0},
        4 * (G(mp.mpf(7) / 4) / G(mp.mpf(3) / 4)) ** 2, 1e-12,
        "4 G(7/4)^2/G(3/4)^2 = 9/4 exactly since G(7/4) = (3/4) G(3/4)")
    add("amplitude_ratio_n5_s1.5_p5", {"op": "amplitude_ratio", "n": 5, "s": 1.5, "p": 5.0},
        R(5, mp.mpf("1.5"), 5), 1e-12, "G(2.125)G(1.875)/(G(0.375)G(0.625)) in mpmath")
    add("amplitude_ratio_n11_s1_p3", {"op": "amplitude_ratio", "n": 11, "s": 1.0, "p": 3.0},
        mp.mpf(2), 1e-12, "s=1 reduction q (n/2 - 1 - q) with q = 1/(p-1)")
    add("amplitude_n5_s1.5_p5", {"op": "singular_amplitude", "n": 5, "s": 1.5, "p": 5.0},
        (8 * R(5, mp.mpf("1.5"), 5)) ** mp.mpf("0.25"), 1e-12, "(2^(2s) R)^(1/(p-1)) in mpmath")
    add("amplitude_n11_s1_p5", {"op": "singular_amplitude", "n": 11, "s": 1.0, "p": 5.0},
        mp.mpf("4.25") ** mp.mpf("0.25"), 1e-12,
        "classical (2/(p-1))(n-2-2/(p-1)) = 4.25 equals A^(p-1); A = 4.25^(1/4)")
    add("phi_n11_s1_p6", {"op": "phi", "n": 11, "s": 1.0, "p": 6.0}, phi(11, 1, 6), 1e-10,
        "positive below p_c(11)")
    add("phi_n11_s1_p7", {"op": "phi", "n": 11, "s": 1.0, "p": 7.0}, phi(11, 1, 7), 1e-9,
        "negative above p_c(11)")
    add("verdict_n11_s1_p7", {"op": "verdict", "n": 11, "s": 1.0, "p": 7.0},
        VERDICT_CODES["JLRegime"], 0, "p_c(11) = 6.92202 < 7; verdict code of JLRegime")
    add("verdict_n13_s2_p28", {"op": "verdict", "n": 13, "s": 2.0, "p": 28.0},
        VERDICT_CODES["SupercriticalLiouville"], 0,
        "p_c(13) = 28.172 > 28; verdict code of SupercriticalLiouville")
    add("jl_n11_s1", {"op": "jl_exponent", "n": 11, "s": 1.0}, pc1(11), 1e-10,
        "closed form (37 + 8 sqrt 10)/9")
    add("jl_n13_s2", {"op": "jl_exponent", "n": 13, "s": 2.0}, pc2(13), 1e-10,
        "bilaplacian closed form at n=13")
    add("pc1_n11", {"op": "pc_closed_s1", "n": 11}, (37 + 8 * mp.sqrt(10)) / 9, 1e-13,
        "(37 + 8 sqrt 10)/9")
    add("pc2_n13", {"op": "pc_closed_s2", "n": 13}, pc2(13), 1e-13, "mpmath evaluation")

    # powercalc
    add("gamma_t_n5_t0.5_b0", {"op": "gamma_t_beta", "n": 5, "t": 0.5, "beta": 0.0},
        mp.pi / 2, 1e-12, "2 G(3/2)^2/G(1)^2 = pi/2")
    add("fraclap_coeff_n5_s1.5_e-0.75",
        {"op": "frac_lap_coefficient", "n": 5, "s": 1.5, "e": -0.75},
        8 * R(5, mp.mpf("1.5"), 5), 1e-12, "equals A^(p-1) = 2^(2s) R at p=5")
    add("oracle_n5_t0.5_e-2", {"op": "fraclap_oracle", "n": 5, "t": 0.5, "e": -2.0},
        mp.pi / 2, 1e-6, "gamma_{1/2}(0) = pi/2")
    add("oracle_n4_t0.9_e-1", {"op": "fraclap_oracle", "n": 4, "t": 0.9, "e": -1.0},
        gamma_t(4, mp.mpf("0.9"), mp.mpf("0.1")), 1e-6,
        "mpmath gamma_t at beta = e + (n-2t)/2 = 0.1")
    add("singular_n5_s1.5_p5", {"op": "singular_residual", "n": 5, "s": 1.5, "p": 5.0},
        0, 1e-10, "exact Gamma identity chain; residual is rounding only")

    # spherekit
    t = sp.symbols("t", positive=True)
    k0 = sp.integrate(t**2 / (1 + t**2) ** 3, (t, 0, 1))
    assert sp.simplify(k0 - sp.pi / 32) == 0
    add("kernel_K0_n5_s1.5", {"op": "kernel_K", "n": 5, "s": 1.5, "alpha": 0.0, "mu": 0.0},
        mp.mpf(sp.N(k0, 30)), 1e-9, "sympy: int_0^1 t^2/(1+t^2)^3 dt = pi/32")
    add("kernel_n5_s1.5_a0.5_mu-1",
        {"op": "kernel_K", "n": 5, "s": 1.5, "alpha": 0.5, "mu": -1.0},
        K(5, 1.5, 0.5, -1), 1e-9, "mpmath quad, 40 digits")
    add("kernel_fd_n5_s1.5_a0.5_mu0",
        {"op": "kernel_fd_derivative", "n": 5, "s": 1.5, "alpha": 0.5, "mu": 0.0, "h": 1e-3},
        dK(5, 1.5, 0.5, 0), 1e-5, "mpmath quad of the ln t integrand; FD error O(h^2)")
    mus = [-1.0, -0.5, 0.0, 0.5, 0.9]
    add("kernel_margin_n5_s1.5_p5", {"op": "kernel_min_margin", "n": 5, "s": 1.5, "p": 5.0,
                                     "mu": mus},
        min(K(5, 1.5, 0.75, m) - K(5, 1.5, 1.0, m) for m in mus), 1e-7,
        "mpmath quad; all margins positive")
    add("kernel_margin_n5_s1.5_p3", {"op": "kernel_min_margin", "n": 5, "s": 1.5, "p": 3.0,
                                     "mu": mus},
        min(K(5, 1.5, 1.5, m) - K(5, 1.5, 1.0, m) for m in mus), 1e-7,
        "p < p_S: margin stays positive because K_alpha is symmetric about (n-2s)/2")
    n, s = 5, mp.mpf("0.75")
    lam = 4**s * H(n, s)
    add("regularized_limit_n5_s0.75",
        {"op": "regularized_limit", "n": 5, "s": 0.75, "a": 1.75, "delta": 1e-4},
        lam / fraclap_c(n, s), 1e-4, "Lambda_{n,s}/c_{n,s} from mpmath Gamma values")
    add("divergence_exponent_n5_s1.5",
        {"op": "divergence_exponent", "n": 5, "s": 1.5, "a": 0.75, "delta": 1e-3,
         "tol_kind": "abs"},
        -0.5, 2e-2, "leading term delta^(1-s)")
    add("divergence_ratio_n5_s1.5",
        {"op": "divergence_c1_ratio", "n": 5, "s": 1.5, "a": 0.75, "a2": 1.0, "delta": 1e-3},
        mp.mpf("0.75") * (2 - mp.mpf("0.75")) / (1 * (2 - 1)), 5e-2,
        "N''(1) = 2a(n-2s-a)")

    # extkit
    add("profile_s1.5_xi1", {"op": "profile_closed_form_error", "s": 1.5, "xi": 1.0}, 0, 1e-8,
        "b=0 closed form phi = (1+y)e^-y, chi = -2e^-y")
    add("profile_s1.2_xi1", {"op": "profile_residual", "s": 1.2, "xi": 1.0}, 0, 1e-8,
        "ODE residual of the numerical profile")
    add("dtn_s1.5_xi1", {"op": "dtn", "s": 1.5, "xi": 1.0}, 2, 1e-6, "m = 2 xi^3")
    add("dtn_s1.5_xi2", {"op": "dtn", "s": 1.5, "xi": 2.0}, 16, 1e-6, "m = 2 xi^3")
    xis = [0.25, 0.5, 1.0, 2.0, 4.0]
    add("symbol_s1.5", {"op": "symbol_exponent", "s": 1.5, "xi": xis, "tol_kind": "abs"},
        3, 1e-6, "closed form m = 2 xi^3")
    add("symbol_s1.2", {"op": "symbol_exponent", "s": 1.2, "xi": xis, "tol_kind": "abs"},
        mp.mpf("2.4"), 1e-3, "symbol |xi|^(2s)")
    x1, x2, y = sp.symbols("x1 x2 y")
    expr = sp.sympify(POLYNOMIALS["P1"][0])
    b = sp.Rational(2, 5)
    lap_b = sp.diff(expr, x1, 2) + sp.diff(expr, x2, 2) + sp.diff(expr, y, 2) + b / y * sp.diff(expr, y)
    pt = (sp.Rational(3, 10), sp.Rational(-7, 10), sp.Rational(6, 5))
    add("delta_b_P1", {"op": "delta_b_poly", "poly": "P1", "b": 0.4,
                       "point": [0.3, -0.7, 1.2], "h": 1e-3},
        mp.mpf(sp.N(lap_b.subs(dict(zip((x1, x2, y), pt))), 30)), 1e-5,
        "sympy Delta_b of the polynomial; FD error O(h^2)")
    add("identity_order_gauss_1pxy",
        {"op": "identity_order", "b": 0.4, "seed": 20240601, "h": [1e-2, 5e-3, 2.5e-3],
         "tol_kind": "abs"},
        2, 0.2, "second-order central differences")

    # energykit
    add("energy_resolution_gaussian",
        {"op": "energy_resolution_gap", "field": "gaussian", "n": 5, "s": 1.5, "p": 5.0, "r": 1.0},
        0, 1e-6, "self-convergence between two quadrature resolutions")
    add("scale_residual_gaussian",
        {"op": "scale_residual", "field": "gaussian", "n": 5, "s": 1.5, "p": 5.0, "lam": 2.0,
         "r": 1.0},
        0, 1e-6, "exact change of variables")
    add("defect_eps_ratio",
        {"op": "defect_eps_ratio", "n": 5, "s": 1.5, "p": 5.0, "q": -0.5, "eps": 1e-3, "r": 1.0},
        4, 1e-9, "defect is exactly quadratic in eps")

    # cli
    add("cli_classify_n11_s1_p7", {"op": "cli_verdict", "n": 11, "s": 1.0, "p": 7.0},
        VERDICT_CODES["JLRegime"], 0, "p_c(11) < 7")
    add("cli_pc_s1_n11", {"op": "cli_pc", "s": 1.0, "n_range": "10..12", "n": 11}, pc1(11), 1e-10,
        "closed form at n=11")
    add("cli_pc_s2_n13", {"op": "cli_pc", "s": 2.0, "n_range": "12..13", "n": 13}, pc2(13), 1e-10,
        "closed form at n=13")
    root = mp.findroot(lambda p: phi(12, mp.mpf("1.5"), p), (13, 15), solver="anderson")
    add("cli_pc_s1.5_first",
        {"op": "cli_pc_first_finite", "s": 1.5, "n_range": "7..20", "n": 12}, root, 1e-10,
        "mpmath root of p R(p) - H at n=12; first finite value, decreasing afterwards")
    add("cli_region_consistency",
        {"op": "cli_region_mismatches", "s": 1.5, "n_range": "11..14", "p_range": "2..40",
         "steps": 20},
        0, 0, "verdicts agree with the pc table")
    add("cli_verify_singular", {"op": "cli_verify_singular", "n": 5, "s": 1.5, "p": 5.0}, 0, 1e-10,
        "residual below 1e-10")
    add("cli_dtn_s1.5", {"op": "cli_dtn", "s": 1.5, "xi": xis, "tol_kind": "abs"}, 3, 1e-6,
        "m = 2 xi^3")
    add("cli_energy_gaussian",
        {"op": "cli_energy", "field": "gaussian", "s": 1.5, "p": 5.0, "lam": 2.0, "r": 1.0},
        0, 1e-6, "scale invariance")


def main():
    build()
    lines = [
        "# id | inputs | expected | tol",
        "# regenerate with: python3 scripts/make_fixtures.py",
        "",
    ]
    for fx in FIXTURES:
        lines.append(f"# {fx.provenance}")
        lines.append(format_fixture_line(fx))
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(FIXTURES)} fixtures to {OUT}")


if __name__ == "__main__":
    main()
