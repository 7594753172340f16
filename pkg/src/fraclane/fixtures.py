"""Oracle fixtures: frozen reference values and the code paths they check.

Each record in ``data/oracle_fixtures.txt`` reads::

    id | key=value,key=value,... | expected | tol

The expected values were produced outside the package (high-precision
mpmath Gamma values and quadrature, sympy antiderivatives, closed-form ODE
solutions); ``scripts/make_fixtures.py`` regenerates the file. Lines starting
with ``#`` are provenance notes and attach to the next record.

``tol`` is relative unless the expected value is zero or the inputs carry
``tol_kind=abs``. List-valued inputs use ``;`` as separator.
"""

from __future__ import annotations

import contextlib
import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np

from . import energykit, exponents, extkit, gammakit, powercalc, spherekit
from .errors import DomainError

__all__ = [
    "OracleFixture",
    "FixtureResult",
    "load_fixtures",
    "parse_fixture_line",
    "format_fixture_line",
    "run_fixture",
    "run_all",
    "VERDICT_CODES",
    "POLYNOMIALS",
]

FIXTURE_FILE = "oracle_fixtures.txt"
VERDICT_CODES = {v.value: i for i, v in enumerate(exponents.Verdict)}


@dataclass(frozen=True)
class OracleFixture:
    id: str
    inputs: dict
    expected: float
    tolerance: float
    provenance: str = ""


@dataclass(frozen=True)
class FixtureResult:
    id: str
    measured: float
    expected: float
    abs_error: float
    rel_error: float
    tolerance: float
    passed: bool


# ------------------------------------------------------------------ file format

def _parse_value(text: str):
    text = text.strip()
    if ";" in text:
        return [_parse_value(t) for t in text.split(";") if t.strip()]
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _format_value(v) -> str:
    if isinstance(v, (list, tuple)):
        return ";".join(_format_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def parse_fixture_line(line: str, provenance: str = "") -> OracleFixture:
    parts = [p.strip() for p in line.split("|")]
    if len(parts) != 4:
        raise DomainError(f"fixture record needs 4 fields: {line!r}")
    fid, raw, expected, tol = parts
    inputs = {}
    for item in filter(None, (t.strip() for t in raw.split(","))):
        if "=" not in item:
            raise DomainError(f"bad input {item!r} in fixture {fid}")
        k, v = item.split("=", 1)
        inputs[k.strip()] = _parse_value(v)
    if "op" not in inputs:
        raise DomainError(f"fixture {fid} has no op")
    return OracleFixture(fid, inputs, float(expected), float(tol), provenance)


def format_fixture_line(fx: OracleFixture) -> str:
    raw = ",".join(f"{k}={_format_value(v)}" for k, v in fx.inputs.items())
    return f"{fx.id} | {raw} | {fx.expected:.17g} | {fx.tolerance:.3g}"


def load_fixtures(path=None) -> dict:
    if path is None:
        text = resources.files("fraclane").joinpath("data", FIXTURE_FILE).read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    out = {}
    note = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            note.append(line.lstrip("# "))
            continue
        fx = parse_fixture_line(line, " ".join(note))
        note = []
        if fx.id in out:
            raise DomainError(f"duplicate fixture id {fx.id}")
        out[fx.id] = fx
    return out


# ------------------------------------------------------------------ operations

POLYNOMIALS = {
    # name: (sympy-readable expression in x1, x2, y; python callable on (x1, x2, y))
    "P1": ("x1**3*x2 - 2*x1*y**2 + 3*x2**2*y**4 + y**3",
           lambda X: X[0] ** 3 * X[1] - 2 * X[0] * X[2] ** 2 + 3 * X[1] ** 2 * X[2] ** 4
           + X[2] ** 3),
}

_OPS: dict[str, Callable] = {}


def _op(name):
    def deco(fn):
        _OPS[name] = fn
        return fn

    return deco


def _kp(d):
    return spherekit.KernelParams(d["n"], d["s"], d["alpha"], d["mu"])


_op("gamma")(lambda d: gammakit.gamma(d["x"]))
_op("gamma_ratio")(lambda d: gammakit.gamma_ratio(d["a"], d["b"]))
_op("hardy_constant")(lambda d: exponents.hardy_constant(d["n"], d["s"]))
_op("amplitude_ratio")(lambda d: exponents.amplitude_ratio(d["n"], d["s"], d["p"]))
_op("singular_amplitude")(lambda d: exponents.singular_amplitude(d["n"], d["s"], d["p"]))
_op("phi")(lambda d: exponents.stability_discriminant(d["n"], d["s"], d["p"]))
_op("verdict")(lambda d: VERDICT_CODES[exponents.classify(d["n"], d["s"], d["p"]).verdict.value])
_op("jl_exponent")(lambda d: exponents.joseph_lundgren_exponent(d["n"], d["s"]))
_op("pc_closed_s1")(lambda d: exponents.pc_closed_form_s1(d["n"]))
_op("pc_closed_s2")(lambda d: exponents.pc_closed_form_s2(d["n"]))
_op("gamma_t_beta")(lambda d: powercalc.gamma_t_beta(d["n"], d["t"], d["beta"]))
_op("fraclap_oracle")(lambda d: powercalc.quadrature_fraclap_oracle(d["n"], d["t"], d["e"]))
_op("kernel_K")(lambda d: spherekit.kernel_K(_kp(d)))
_op("kernel_dalpha")(lambda d: spherekit.kernel_alpha_derivative(_kp(d)))
_op("dtn")(lambda d: extkit.extract_dtn_multiplier(extkit.solve_extension_profile(d["xi"], d["s"])))
_op("profile_residual")(lambda d: extkit.solve_extension_profile(d["xi"], d["s"]).residual)


@_op("frac_lap_coefficient")
def _frac_lap_coefficient(d):
    f = powercalc.RadialPower(1.0, d["e"])
    return powercalc.frac_laplacian_power(d["n"], d["s"], f).coefficient


@_op("singular_residual")
def _singular_residual(d):
    c = powercalc.verify_singular_solution(d["n"], d["s"], d["p"])
    return c.coefficient_residual if c.exponent_match and c.beta_in_window else math.inf


@_op("kernel_fd_derivative")
def _kernel_fd(d):
    h = d["h"]
    kp = lambda a: spherekit.kernel_K(spherekit.KernelParams(d["n"], d["s"], a, d["mu"]))
    return (kp(d["alpha"] + h) - kp(d["alpha"] - h)) / (2 * h)


@_op("kernel_min_margin")
def _kernel_margin(d):
    return spherekit.kernel_comparison(d["n"], d["s"], d["p"], d["mu"]).min_margin


@_op("regularized_limit")
def _reg_limit(d):
    return spherekit.regularized_constant(d["n"], d["s"], d["a"], d["delta"]).limit_estimate


@_op("divergence_exponent")
def _div_exp(d):
    return spherekit.regularized_constant(d["n"], d["s"], d["a"], d["delta"]).divergence_fit[0]


@_op("divergence_c1_ratio")
def _div_ratio(d):
    c1 = spherekit.regularized_constant(d["n"], d["s"], d["a"], d["delta"]).divergence_fit[1]
    c2 = spherekit.regularized_constant(d["n"], d["s"], d["a2"], d["delta"]).divergence_fit[1]
    return c1 / c2


@_op("profile_closed_form_error")
def _profile_cf(d):
    xi = d["xi"]
    pr = extkit.solve_extension_profile(xi, d["s"])
    y = pr.y_grid
    e1 = np.abs(pr.phi - (1 + xi * y) * np.exp(-xi * y)).max()
    e2 = np.abs(pr.chi + 2 * xi**2 * np.exp(-xi * y)).max() / xi**2
    return float(max(e1, e2))


@_op("symbol_exponent")
def _symbol_exponent(d):
    xs = d["xi"]
    ms = [extkit.extract_dtn_multiplier(extkit.solve_extension_profile(x, d["s"])) for x in xs]
    return extkit.fit_symbol_exponent(list(zip(xs, ms)))[0]


@_op("delta_b_poly")
def _delta_b_poly(d):
    _, fn = POLYNOMIALS[d["poly"]]
    return extkit.delta_b_fd(fn, d["point"], d["h"], d["b"])


@_op("identity_order")
def _identity_order(d):
    """Order of the quadratic identity for ``zeta = exp(-(x^2+y^2))``, ``eta = 1 + x y``."""
    rng = np.random.default_rng(d["seed"])
    pts = np.column_stack([rng.uniform(-1, 1, 20), rng.uniform(0.2, 1.5, 20)])
    zeta = lambda X: math.exp(-(X[0] ** 2 + X[1] ** 2))
    eta = lambda X: 1.0 + X[0] * X[1]
    (o1, o2), _ = extkit.identity_convergence_order(zeta, eta, pts, d["b"], tuple(d["h"]))
    return o2 if d.get("which", "second") == "second" else o1


def _field(d):
    return energykit.builtin_field(d["field"], d["n"], d["s"], d["p"], d.get("q"))


@_op("energy_resolution_gap")
def _energy_gap(d):
    f = _field(d)
    e1 = energykit.energy_E(f, None, d["r"]).total
    fine = energykit.QuadConfig(radial_nodes=20, polar_nodes=48)
    e2 = energykit.energy_E(f, None, d["r"], fine).total
    return abs(e1 - e2) / (1.0 + abs(e2))


@_op("scale_residual")
def _scale_residual(d):
    return energykit.scale_invariance_residual(_field(d), d["lam"], d["r"])


@_op("defect_eps_ratio")
def _defect_ratio(d):
    n, s, p = d["n"], d["s"], d["p"]
    base = energykit.homogeneous_field(n, s, p)
    pert = energykit.homogeneous_field(n, s, p, d["q"])
    vals = [energykit.homogeneity_defect(energykit.superpose(base, pert, eps), d["r"])
            for eps in (d["eps"], 2 * d["eps"])]
    return vals[1] / vals[0]


# ------------------------------------------------------------------ CLI fixtures

def _cli_capture(argv) -> tuple[int, str]:
    from . import cli

    fd, path = tempfile.mkstemp(suffix=".out")
    os.close(fd)
    try:
        with contextlib.redirect_stderr(io.StringIO()):
            code = cli.main(list(argv) + ["--output", path])
        with open(path, encoding="utf-8") as fh:
            return code, fh.read()
    finally:
        os.unlink(path)


def _cli_json(argv):
    code, text = _cli_capture(argv)
    if code != 0:
        return code, None
    return code, json.loads(text)


def _cli_rows(argv):
    code, text = _cli_capture(argv)
    return code, list(csv.DictReader(io.StringIO(text)))


@_op("cli_verdict")
def _cli_verdict(d):
    code, doc = _cli_json(["classify", "--n", str(d["n"]), "--s", str(d["s"]), "--p", str(d["p"])])
    return VERDICT_CODES[doc["verdict"]] if code == 0 else math.nan


@_op("cli_pc")
def _cli_pc(d):
    code, rows = _cli_rows(["pc", "--s", str(d["s"]), "--n-range", d["n_range"]])
    if code != 0:
        return math.nan
    return float(next(r["p_c"] for r in rows if int(r["n"]) == d["n"]))


@_op("cli_pc_first_finite")
def _cli_pc_first(d):
    """``p_c`` at the first dimension where it is finite; nan unless strictly decreasing after."""
    code, rows = _cli_rows(["pc", "--s", str(d["s"]), "--n-range", d["n_range"]])
    if code != 0:
        return math.nan
    vals = [float(r["p_c"]) for r in rows]
    finite = [v for v in vals if math.isfinite(v)]
    first = vals.index(finite[0])
    if any(math.isfinite(v) for v in vals[:first]) or not all(math.isfinite(v) for v in vals[first:]):
        return math.nan
    if not all(a > b for a, b in zip(finite, finite[1:])):
        return math.nan
    if int(rows[first]["n"]) != d["n"]:
        return math.nan
    return finite[0]


@_op("cli_region_mismatches")
def _cli_region(d):
    """Grid points whose verdict disagrees with the side of ``p_c`` they lie on."""
    s = d["s"]
    code, rows = _cli_rows(["region", "--s", str(s), "--n-range", d["n_range"],
                            "--p-range", d["p_range"], "--steps", str(d["steps"])])
    code2, pcs = _cli_rows(["pc", "--s", str(s), "--n-range", d["n_range"]])
    if code or code2:
        return math.nan
    pc = {int(r["n"]): float(r["p_c"]) for r in pcs}
    ps = {int(r["n"]): float(r["p_sobolev"]) for r in pcs}
    bad = 0
    for r in rows:
        n, p, v = int(r["n"]), float(r["p"]), r["verdict"]
        if p < ps[n]:
            want = "SubcriticalLiouville"
        elif p < pc[n]:
            want = "SupercriticalLiouville"
        else:
            want = "JLRegime"
        bad += v != want
    return float(bad)


@_op("cli_verify_singular")
def _cli_vs(d):
    code, doc = _cli_json(["verify-singular", "--n", str(d["n"]), "--s", str(d["s"]),
                           "--p", str(d["p"])])
    return doc["coefficient_residual"] if code == 0 and doc["pass"] else math.inf


@_op("cli_dtn")
def _cli_dtn(d):
    code, doc = _cli_json(["dtn", "--s", str(d["s"]), "--xi", ",".join(map(str, d["xi"]))])
    return doc["exponent"] if code == 0 else math.nan


@_op("cli_energy")
def _cli_energy(d):
    code, doc = _cli_json(["energy", "--field", d["field"], "--s", str(d["s"]), "--p", str(d["p"]),
                           "--lambda", str(d["lam"]), "--r", str(d["r"])])
    return doc["scale_invariance_residual"] if code == 0 else math.inf


# ------------------------------------------------------------------ running

def run_fixture(fixture, fixtures: dict | None = None) -> FixtureResult:
    """Evaluate one fixture (an ``OracleFixture`` or an id) and compare.

    Raises
    ------
    DomainError
        If the id or its operation is unknown.
    """
    if isinstance(fixture, str):
        table = fixtures if fixtures is not None else load_fixtures()
        if fixture not in table:
            raise DomainError(f"unknown fixture id {fixture!r}")
        fixture = table[fixture]
    op = fixture.inputs["op"]
    if op not in _OPS:
        raise DomainError(f"fixture {fixture.id}: unknown operation {op!r}")
    measured = float(_OPS[op](fixture.inputs))
    exp = fixture.expected
    abs_err = abs(measured - exp) if math.isfinite(measured) else math.inf
    rel_err = abs_err / abs(exp) if exp != 0 else abs_err
    absolute = exp == 0 or fixture.inputs.get("tol_kind") == "abs"
    err = abs_err if absolute else rel_err
    return FixtureResult(fixture.id, measured, exp, abs_err, rel_err, fixture.tolerance,
                         bool(err <= fixture.tolerance))


def run_all(path=None) -> list[FixtureResult]:
    table = load_fixtures(path)
    return [run_fixture(fx) for fx in table.values()]
