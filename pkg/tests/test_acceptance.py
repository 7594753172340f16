"""Acceptance criteria, one test per criterion.

Each test records its outcome through the ``acceptance`` fixture, and the
terminal summary prints one PASS/FAIL line per criterion.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from fraclane import energykit as en
from fraclane import exponents as ex
from fraclane import extkit as ek
from fraclane import powercalc as pc
from fraclane import spherekit as sk


def _same(a, b, rel):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= rel * abs(b)


def test_jl_cross_check_laplacian(acceptance):
    t0 = time.perf_counter()
    bad = []
    for n in range(3, 31):
        got, ref = ex.joseph_lundgren_exponent(n, 1.0), ex.pc_closed_form_s1(n)
        want_inf = n <= 10
        if want_inf != math.isinf(got) or not _same(got, ref, 1e-8):
            bad.append(n)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5.0
    acceptance(1, "p_c(n, 1) matches the closed form, n = 3..30", ok,
               f"mismatches={bad} runtime={elapsed:.2f}s")
    assert ok


def test_jl_cross_check_bilaplacian(acceptance):
    t0 = time.perf_counter()
    bad = []
    for n in range(5, 31):
        got, ref = ex.joseph_lundgren_exponent(n, 2.0), ex.pc_closed_form_s2(n)
        want_inf = n <= 12
        if want_inf != math.isinf(got) or not _same(got, ref, 1e-8):
            bad.append(n)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5.0
    acceptance(2, "p_c(n, 2) matches the closed form, n = 5..30", ok,
               f"mismatches={bad} runtime={elapsed:.2f}s")
    assert ok


def test_laplacian_criterion_reduction(acceptance):
    worst, flips = 0.0, 0
    for n in range(3, 23):
        ps = ex.sobolev_exponent(n, 1.0)
        hi = 60.0 if math.isinf(ps) else max(60.0, 3 * ps)
        lo = 1.05 if math.isinf(ps) else ps * (1 + 1e-6)
        for p in np.geomspace(lo, hi, 20):
            q = 1.0 / (p - 1)
            reduced = p * q * (n / 2 - 1 - q) - ((n - 2) / 4) ** 2
            phi = ex.stability_discriminant(n, 1.0, float(p))
            worst = max(worst, abs(phi - reduced))
            flips += (phi > 0) != (reduced > 0)
    ok = worst <= 1e-10 and flips == 0
    acceptance(3, "s = 1 discriminant equals the reduced inequality on a 20x20 grid", ok,
               f"max|diff|={worst:.2e} sign flips={flips}")
    assert ok


def test_ratio_meets_hardy_at_sobolev(acceptance):
    rng = np.random.default_rng(20240611)
    worst, count = 0.0, 0
    while count < 30:
        n = int(rng.integers(1, 41))
        s = float(rng.uniform(0.01, 1.99))
        if not n > 2 * s:
            continue
        ps = ex.sobolev_exponent(n, s)
        r = ex.amplitude_ratio(n, s, ps + 1e-8)
        h = ex.hardy_ratio(n, s)
        worst = max(worst, abs(r - h) / h)
        count += 1
    ok = worst <= 1e-5
    acceptance(4, "R(p_S + 1e-8) agrees with H for 30 random (n, s)", ok, f"max rel={worst:.2e}")
    assert ok


def test_quadrature_oracle_agreement(acceptance):
    cases = [(5, 0.5, 0.0)]
    for n in (1, 2, 3, 5, 8):
        for t in (0.1, 0.5, 0.9):
            lo, hi = pc.admissible_beta_window(n, t)
            cases += [(n, t, lo + f * (hi - lo)) for f in (0.15, 0.45, 0.75)]
    worst = 0.0
    for n, t, beta in cases:
        e = (2 * t - n) / 2 + beta
        g = pc.gamma_t_beta(n, t, beta)
        worst = max(worst, abs(pc.quadrature_fraclap_oracle(n, t, e) - g) / abs(g))
    anchor = pc.quadrature_fraclap_oracle(5, 0.5, -2.0)
    anchor_err = abs(anchor - math.pi / 2) / (math.pi / 2)
    anchor_err = max(anchor_err, abs(pc.gamma_t_beta(5, 0.5, 0.0) - math.pi / 2) / (math.pi / 2))
    ok = len(cases) >= 30 and worst <= 1e-6 and anchor_err <= 1e-6
    acceptance(5, "quadrature oracle agrees with gamma_t(beta)", ok,
               f"cases={len(cases)} max rel={worst:.2e} anchor rel={anchor_err:.1e}")
    assert ok


def test_singular_solution_grid(acceptance):
    worst, misses, checked, skipped = 0.0, 0, 0, []
    for n in range(3, 11):
        for s in (1.1, 1.5, 1.9):
            if not n > 2 * s:
                skipped.append((n, s))  # p_S is infinite, the range is empty
                continue
            ps = ex.sobolev_exponent(n, s)
            for p in [ps * (1 + 1e-6)] + [ps * (1 + k / 2) for k in range(1, 7)]:
                c = pc.verify_singular_solution(n, s, p)
                worst = max(worst, c.coefficient_residual)
                misses += not (c.exponent_match and c.beta_in_window)
                checked += 1
    ok = worst < 1e-10 and misses == 0
    acceptance(6, "singular solution verified on the (n, s, p) grid", ok,
               f"cases={checked} max residual={worst:.1e} exponent misses={misses} "
               f"empty={len(skipped)}")
    assert ok


def test_kernel_lemma(acceptance):
    mus = np.linspace(-1.0, 0.9, 10)
    worst_d, worst_m = -math.inf, math.inf
    for n, s in [(3, 0.5), (5, 1.5), (8, 1.2), (12, 1.9)]:
        c = (n - 2 * s) / 2
        for alpha in np.linspace(-2 * s + 0.05, c - 0.05, 8):
            for mu in mus:
                worst_d = max(worst_d, sk.kernel_alpha_derivative(sk.KernelParams(n, s, float(alpha), float(mu))))
        ps = ex.sobolev_exponent(n, s)
        for p in (ps * 1.01, ps * 2, ps * 10):
            worst_m = min(worst_m, sk.kernel_comparison(n, s, p, mus).min_margin)
    k0 = sk.kernel_K(sk.KernelParams(5, 1.5, 0.0, 0.0))
    anchor_err = abs(k0 - math.pi / 32)
    ok = worst_d < 0 and worst_m > 0 and anchor_err <= 1e-9
    acceptance(7, "K_alpha decreasing below the centre with K_0(0) = pi/32", ok,
               f"max dK={worst_d:.2e} min margin={worst_m:.2e} anchor err={anchor_err:.1e}")
    assert ok


def test_regularized_divergence(acceptance):
    n, s, a, a2 = 5, 1.5, 1.0, 0.5
    r1 = sk.regularized_constant(n, s, a, 0.01)
    r2 = sk.regularized_constant(n, s, a2, 0.01)
    g1, c1 = r1.divergence_fit
    g2, c2 = r2.divergence_fit
    want = a * (n - 2 * s - a) / (a2 * (n - 2 * s - a2))
    ratio_err = abs(c1 / c2 - want) / want
    ok = abs(g1 + 0.5) <= 0.02 and abs(g2 + 0.5) <= 0.02 and ratio_err <= 0.05
    acceptance(8, "cutoff constants diverge like delta^(-1/2) with the predicted ratio", ok,
               f"exponents=({g1:.4f}, {g2:.4f}) ratio rel err={ratio_err:.1e}")
    assert ok


def test_dtn_symbol(acceptance):
    xs = [0.25, 0.5, 1.0, 2.0, 4.0]
    errs = {}
    anchor = 0.0
    for s in (1.2, 1.5, 1.8):
        ms = [ek.extract_dtn_multiplier(ek.solve_extension_profile(x, s)) for x in xs]
        errs[s] = abs(ek.fit_symbol_exponent(list(zip(xs, ms)))[0] - 2 * s)
        if s == 1.5:
            anchor = max(abs(m - 2 * x**3) / (2 * x**3) for x, m in zip(xs, ms))
    ok = max(errs.values()) <= 1e-3 and anchor <= 1e-6
    acceptance(9, "DtN multiplier scales like xi^(2s); m = 2 xi^3 at s = 3/2", ok,
               f"max exponent err={max(errs.values()):.1e} anchor rel={anchor:.1e}")
    assert ok


def test_product_identities(acceptance):
    rng = np.random.default_rng(11)
    orders = []
    for _ in range(20):
        n = int(rng.integers(1, 4))
        b = 3 - 2 * float(rng.uniform(1.05, 1.95))
        zeta, eta = ek.random_smooth_field(rng, n + 1), ek.random_smooth_field(rng, n + 1)
        pts = [np.concatenate([rng.uniform(-0.5, 0.5, n), [rng.uniform(0.3, 1.0)]]) for _ in range(2)]
        (o1, o2), _ = ek.identity_convergence_order(zeta, eta, pts, b)
        orders += [o1, o2]
    ok = all(abs(o - 2.0) <= 0.2 for o in orders)
    acceptance(10, "product identities converge at order h^2 on 20 random pairs", ok,
               f"orders in [{min(orders):.3f}, {max(orders):.3f}]")
    assert ok


def test_energy_structure(acceptance):
    worst = 0.0
    params = [(5, 1.5, 5.0), (3, 1.2, 3.0), (8, 1.8, 9.0)]
    for n, s, p in params:
        fields = [en.gaussian_field(n, s, p), en.bump_field(n, s, p, radius=1.5),
                  en.homogeneous_field(n, s, p, q=-0.3), en.homogeneous_field(n, s, p)]
        for f in fields:
            for lam in (0.5, 2.0, 3.0):
                for r in (0.5, 1.0, 2.0):
                    worst = max(worst, en.scale_invariance_residual(f, lam, r))
    zero = all(en.energy_E(en.zero_field(n, s, p), r=r).terms == (0.0,) * 6
               for n, s, p in params for r in (0.5, 2.0))
    defect = max(en.homogeneity_defect(en.homogeneous_field(n, s, p), r)
                 for n, s, p in params for r in (0.5, 1.0, 2.0))
    ok = worst <= 1e-6 and zero and defect == 0.0
    acceptance(11, "energy is scale invariant and degenerates correctly", ok,
               f"max scale residual={worst:.1e} zero field={zero} max defect={defect}")
    assert ok


def test_cli_determinism(acceptance, tmp_path):
    runs = {
        "pc.csv": ["pc", "--s", "1.5", "--n-range", "7..16"],
        "region.csv": ["region", "--s", "1.5", "--n-range", "5..8", "--p-range", "2..20", "--steps", "6"],
        "classify.json": ["classify", "--n", "11", "--s", "1", "--p", "7"],
        "dtn.json": ["dtn", "--s", "1.2", "--xi", "0.25,0.5,1,2,4"],
        "energy.json": ["energy", "--field", "bump", "--s", "1.5", "--p", "5", "--lambda", "2",
                        "--r", "1"],
    }
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# shared settings\nformat = csv\n", encoding="utf-8")
    differing = []
    for name, argv in runs.items():
        outputs = []
        for rep, threads in enumerate(("1", "1", "4")):
            dest = tmp_path / f"{rep}-{name}"
            fmt = ["--format", name.rsplit(".", 1)[1]]
            env = dict(os.environ, FRACLANE_THREADS=threads)
            proc = subprocess.run([sys.executable, "-m", "fraclane.cli", *argv, *fmt, "-o", str(dest)],
                                  env=env, capture_output=True)
            assert proc.returncode == 0, proc.stderr
            outputs.append(dest.read_bytes())
        if len(set(outputs)) != 1:
            differing.append(name)
    # the same run driven by a config file
    a = subprocess.run([sys.executable, "-m", "fraclane.cli", "pc", "--config", str(cfg), "--s", "1",
                        "--n-range", "10..14"], capture_output=True)
    b = subprocess.run([sys.executable, "-m", "fraclane.cli", "pc", "--config", str(cfg), "--s", "1",
                        "--n-range", "10..14"], capture_output=True)
    if a.stdout != b.stdout or not a.stdout:
        differing.append("config")
    ok = not differing
    acceptance(12, "repeated CLI runs give byte-identical CSV and JSON", ok,
               f"runs={len(runs) * 3 + 2} differing={differing}")
    assert ok
