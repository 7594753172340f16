"""Command line front end.

Usage::

    fraclane classify --n 5 --s 1.5 --p 3
    fraclane pc --s 1 --n-range 10..12
    fraclane region --s 1.5 --n-range 10..12 --p-range 2..20 --steps 3
    fraclane verify-singular --n 5 --s 1.5 --p 5
    fraclane kernel --n 5 --s 1.5 --p 5 --mu -1,-0.5,0,0.5,0.9
    fraclane dtn --s 1.5 --xi 0.25,0.5,1,2,4
    fraclane energy --field gaussian --s 1.5 --p 5 --lambda 2 --r 1

Every command accepts ``--config FILE`` (``key=value`` lines, ``#``
comments; command-line flags win), ``--output PATH`` and ``--format``.
Grid sweeps use ``FRACLANE_THREADS`` worker threads; output does not depend
on it. Exit codes: 0 success, 2 invalid parameters, 3 numerical failure or a
failed check.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import energykit, exponents, extkit, powercalc, spherekit
from .errors import DomainError, NumericalFailure

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

THREADS_ENV = "FRACLANE_THREADS"


class _Invalid(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _Invalid(message)


# ------------------------------------------------------------------ formatting

def fmt_float(x) -> str:
    """Scientific notation with 15 significant digits; ``inf``, ``-inf``, ``nan``."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.14e}"


def _json_value(v):
    if v is None:
        return "null"
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        x = float(v)
        # JSON has no infinities; keep them as strings
        return fmt_float(x) if math.isfinite(x) else json.dumps(fmt_float(x))
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return _json_object(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _json_object(d: dict, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    items = []
    for k, v in d.items():
        val = _json_object(v, indent + 1) if isinstance(v, dict) else _json_value(v)
        items.append(f"{pad}{json.dumps(str(k))}: {val}")
    return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"


def render_json(doc: dict) -> str:
    return _json_object(doc) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return "nan"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_csv_cell(row[h]) for h in header) + "\n")
    return buf.getvalue()


# ------------------------------------------------------------------ parsing helpers

def parse_range(text: str, kind=float):
    """``"a..b"`` (inclusive; integers step by one) or a comma list."""
    text = str(text).strip()
    if ".." in text:
        lo, hi = (kind(t) for t in text.split("..", 1))
        if kind is int:
            if hi < lo:
                raise DomainError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        if not hi > lo:
            raise DomainError(f"empty range {text!r}")
        return lo, hi
    vals = [kind(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise DomainError(f"empty list {text!r}")
    return vals


def parse_floats(text: str):
    vals = [float(t) for t in str(text).split(",") if t.strip()]
    if not vals:
        raise DomainError(f"empty list {text!r}")
    return vals


def read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        k = int(raw)
    except ValueError as exc:
        raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if k < 1:
        raise DomainError(f"{THREADS_ENV} must be positive, got {k}")
    return k


def _map(fn, items):
    items = list(items)
    k = thread_count()
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))  # map preserves input order


# ------------------------------------------------------------------ commands


def cmd_classify(n, s, p):
    r = exponents.classify(n, s, p)
    doc = {
        "n": r.n, "s": float(r.s), "p": float(r.p), "p_sobolev": r.p_sobolev,
        "hardy_constant": r.hardy_constant, "amplitude": r.amplitude, "phi": r.phi,
        "verdict": r.verdict.value,
    }
    return doc, True


def cmd_pc(s, n_range):
    ns = list(n_range)
    for n in ns:
        if not n > 2 * s:
            raise DomainError(f"n={n} does not satisfy n > 2s for s={s}")
    pcs = _map(lambda n: exponents.joseph_lundgren_exponent(n, s), ns)
    rows = [{"n": n, "s": float(s), "p_sobolev": exponents.sobolev_exponent(n, s), "p_c": pc}
            for n, pc in zip(ns, pcs)]
    return ["n", "s", "p_sobolev", "p_c"], rows


def cmd_region(s, n_range, p_range, steps):
    if steps < 1:
        raise DomainError(f"steps must be positive, got {steps}")
    lo, hi = p_range
    if not lo > 1:
        raise DomainError(f"p range must lie above 1, got {lo}")
    ps = [lo] if steps == 1 else [float(x) for x in np.linspace(lo, hi, steps)]
    grid = [(n, p) for n in n_range for p in ps]

    def one(np_):
        n, p = np_
        r = exponents.classify(n, s, p)
        return {"n": n, "s": float(s), "p": p, "phi": r.phi, "verdict": r.verdict.value}

    return ["n", "s", "p", "phi", "verdict"], _map(one, grid)


def cmd_verify_singular(n, s, p, tol=1e-10):
    c = powercalc.verify_singular_solution(n, s, p)
    ok = c.exponent_match and c.beta_in_window and c.coefficient_residual < tol
    doc = {
        "n": n, "s": float(s), "p": float(p), "amplitude": c.amplitude, "beta": c.beta,
        "beta_in_window": c.beta_in_window, "output_exponent": str(c.output.exponent),
        "expected_exponent": str(c.expected_exponent), "exponent_match": c.exponent_match,
        "coefficient": c.output.coefficient, "target": c.amplitude**p,
        "coefficient_residual": c.coefficient_residual, "tolerance": tol, "pass": ok,
    }
    return doc, ok


def cmd_kernel(n, s, p, mu, alphas=None):
    cmp_ = spherekit.kernel_comparison(n, s, p, mu)
    a_h = (n - 2 * s) / 2
    if alphas is None:
        alphas = [a_h * k / 5 for k in range(5)]
    derivs = []
    for a in alphas:
        if not a < a_h:
            raise DomainError(f"alpha={a} must lie below (n-2s)/2={a_h}")
        derivs.append([spherekit.kernel_alpha_derivative(spherekit.KernelParams(n, s, a, m))
                       for m in cmp_.mu])
    neg = all(d < 0 for row in derivs for d in row)
    ok = cmp_.passed and neg
    doc = {
        "n": n, "s": float(s), "p": float(p), "alpha_hardy": cmp_.alpha_hardy,
        "alpha_solution": cmp_.alpha_solution, "mu": list(cmp_.mu),
        "k_hardy": list(cmp_.k_hardy), "k_solution": list(cmp_.k_solution),
        "min_margin": cmp_.min_margin, "max_margin": cmp_.max_margin,
        "comparison_holds": cmp_.passed, "alpha_grid": list(alphas),
        "max_alpha_derivative": max(d for row in derivs for d in row),
        "derivative_negative": neg, "pass": ok,
    }
    return doc, ok


def cmd_dtn(s, xi, tol=1e-3):
    profiles = _map(lambda x: extkit.solve_extension_profile(x, s), xi)
    ms = [extkit.extract_dtn_multiplier(pr) for pr in profiles]
    k, c = extkit.fit_symbol_exponent(list(zip(xi, ms)))
    ok = abs(k - 2 * s) <= tol
    doc = {
        "s": float(s), "xi": list(xi), "multiplier": ms,
        "max_residual": max(pr.residual for pr in profiles),
        "exponent": k, "expected_exponent": 2 * s, "exponent_error": abs(k - 2 * s),
        "constant": c, "tolerance": tol, "pass": ok,
    }
    return doc, ok


def cmd_energy(field, n, s, p, lam, r, q=None, tol=1e-6):
    f = energykit.builtin_field(field, n, s, p, q)
    big = energykit.energy_E(f, None, lam * r)
    small = energykit.energy_E(energykit.rescale_field(f, lam), None, r)
    res = abs(big.total - small.total) / (1.0 + abs(big.total))
    ok = res <= tol
    doc = {
        "field": field, "n": n, "s": float(s), "p": float(p), "lambda": float(lam), "r": float(r),
        "E_field_at_lambda_r": dict(zip(("T1", "T2", "T3", "T4", "T5", "T6"), big.terms))
        | {"total": big.total},
        "E_rescaled_at_r": dict(zip(("T1", "T2", "T3", "T4", "T5", "T6"), small.terms))
        | {"total": small.total},
        "homogeneity_defect": energykit.homogeneity_defect(f, lam * r),
        "alpha_mono": big.alpha_mono, "beta_mono": big.beta_mono,
        "mono_condition": big.mono_condition,
        "scale_invariance_residual": res, "tolerance": tol, "pass": ok,
    }
    return doc, ok


# ------------------------------------------------------------------ argparse glue

_SPECS = {
    # name: (type, required)
    "classify": {"n": (int, True), "s": (float, True), "p": (float, True)},
    "pc": {"s": (float, True), "n_range": (str, True)},
    "region": {"s": (float, True), "n_range": (str, True), "p_range": (str, True),
               "steps": (int, True)},
    "verify-singular": {"n": (int, True), "s": (float, True), "p": (float, True),
                        "tol": (float, False)},
    "kernel": {"n": (int, True), "s": (float, True), "p": (float, True),
               "mu": (str, False), "alpha": (str, False)},
    "dtn": {"s": (float, True), "xi": (str, True), "tol": (float, False)},
    "energy": {"field": (str, True), "n": (int, False), "s": (float, True),
               "p": (float, True), "lambda": (float, True), "r": (float, True),
               "q": (float, False), "tol": (float, False)},
}

_DEFAULT_FORMAT = {"pc": "csv", "region": "csv"}
_DEFAULTS = {"mu": "-1,-0.5,0,0.5,0.9", "n": 5}


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="fraclane", description="Stable-solution thresholds for "
                             "(-Delta)^s u = |u|^(p-1) u and verification reports.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    for name, spec in _SPECS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key=value file; flags take precedence")
        sp.add_argument("--output", "-o", help="output path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"))
        for key, (typ, _) in spec.items():
            sp.add_argument("--" + key.replace("_", "-"), dest=key, type=typ, default=None)
    return parser


def _resolve(args) -> dict:
    spec = _SPECS[args.command]
    conf = read_config(args.config) if args.config else {}
    unknown = set(conf) - set(spec) - {"format", "output"}
    if unknown:
        raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")
    vals = {}
    for key, (typ, required) in spec.items():
        v = getattr(args, key)
        if v is None and key in conf:
            try:
                v = typ(conf[key])
            except ValueError as exc:
                raise DomainError(f"config value {key}={conf[key]!r}: {exc}") from exc
        if v is None:
            v = _DEFAULTS.get(key)
        if v is None and required:
            raise DomainError(f"missing required parameter --{key.replace('_', '-')}")
        vals[key] = v
    vals["format"] = args.format or conf.get("format") or _DEFAULT_FORMAT.get(args.command, "json")
    if vals["format"] not in ("csv", "json"):
        raise DomainError(f"unknown format {vals['format']!r}")
    vals["output"] = args.output or conf.get("output")
    for key in ("tol",):
        if vals.get(key) is not None and not vals[key] > 0:
            raise DomainError("tolerances must be positive")
    return vals


def _dispatch(command, v):
    """Return ``(header, rows, ok)`` for tables or ``(None, doc, ok)`` for reports."""
    tol = {} if v.get("tol") is None else {"tol": v["tol"]}
    if command == "classify":
        return (None, *cmd_classify(v["n"], v["s"], v["p"]))
    if command == "pc":
        exponents.ProblemParams(3, v["s"], 2.0)
        h, rows = cmd_pc(v["s"], parse_range(v["n_range"], int))
        return h, rows, True
    if command == "region":
        exponents.ProblemParams(3, v["s"], 2.0)
        pr = parse_range(v["p_range"], float)
        if not isinstance(pr, tuple):
            raise DomainError("p range must be given as lo..hi")
        h, rows = cmd_region(v["s"], parse_range(v["n_range"], int), pr, v["steps"])
        return h, rows, True
    if command == "verify-singular":
        return (None, *cmd_verify_singular(v["n"], v["s"], v["p"], **tol))
    if command == "kernel":
        alphas = parse_floats(v["alpha"]) if v.get("alpha") else None
        return (None, *cmd_kernel(v["n"], v["s"], v["p"], parse_floats(v["mu"]), alphas))
    if command == "dtn":
        return (None, *cmd_dtn(v["s"], parse_floats(v["xi"]), **tol))
    if command == "energy":
        return (None, *cmd_energy(v["field"], v["n"], v["s"], v["p"], v["lambda"], v["r"],
                                  v.get("q"), **tol))
    raise DomainError(f"unknown command {command!r}")


def _render(header, body, fmt) -> str:
    if header is not None:
        if fmt == "csv":
            return render_csv(header, body)
        return render_json({"rows": [{h: row[h] for h in header} for row in body]})
    if fmt == "json":
        return render_json(body)
    flat = {k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in body.items()}
    return render_csv(list(flat), [flat])


def _glue_negative_lists(argv):
    # "--mu -1,-0.5" would otherwise be read as an option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--mu", "--alpha", "--xi"):
            nxt = next(it, None)
            if nxt is not None:
                out.append(f"{tok}={nxt}")
                continue
        out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_glue_negative_lists(argv))
        v = _resolve(args)
        header, body, ok = _dispatch(args.command, v)
        text = _render(header, body, v["format"])
        if v["output"]:
            try:
                with open(v["output"], "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(text)
            except OSError as exc:
                raise DomainError(f"cannot write {v['output']}: {exc}") from exc
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except (_Invalid, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Exception as exc:  # noqa: BLE001 - the exit-code contract has no other codes
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if not ok:
        print("check failed", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
