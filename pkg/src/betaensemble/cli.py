"""Command-line entry point.

    betaensemble <experiment> [--n N[,N...]] [--beta B] [--seed S] ... [--config FILE]

Nested spellings ``resolvent audit``, ``resolvent expand`` and ``special eval``
are accepted alongside the hyphenated names.  Exit codes: 0 success,
1 a property threshold was violated, 2 usage or runtime error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import experiments as ex
from .eigensolver import spectrum
from .errors import InvalidInputError, InvalidParameterError
from .models import EnsembleParams, build_symmetric, build_zero_temperature
from .output import emit, render_csv, render_json, summary_path
from .resolvent import SpectralDomain, stieltjes_from_spectrum, stieltjes_zero_temp_ratio
from .sampling import RngStream
from .special import hermite_function, pr_oscillatory, pr_transition, semicircle_stieltjes

EXPERIMENTS = (
    "sample", "spectrum", "stieltjes", "zero-temp-study", "local-law", "rigidity", "counting",
    "resolvent-audit", "resolvent-expand", "asymptotics", "first-row", "concentration",
    "partial-sum", "special-eval",
)

GLOBAL_DEFAULTS = dict(n=None, beta=2.0, seed=0, trials=100, epsilon=0.1, delta=0.2, c=0.1,
                       grid_re=11, grid_im=11, out=None, format="csv", threads=None,
                       k=100, l=None, x_min=None, x_max=None, points=201, z_re=None, z_im=None,
                       order=3, interval=None, mu=0.2)

EXPERIMENT_DEFAULTS = {
    "sample": dict(n=[5]),
    "spectrum": dict(n=[100]),
    "stieltjes": dict(n=[1000]),
    "zero-temp-study": dict(n=[100, 200, 400, 800, 1600]),
    "local-law": dict(n=[1000]),
    "rigidity": dict(n=[250, 500, 1000], delta=0.1),
    "counting": dict(n=[1000], beta=1.0, interval=[0.1, 0.4]),
    "resolvent-audit": dict(n=[250, 500, 1000], epsilon=0.2),
    "resolvent-expand": dict(n=[400], epsilon=0.2),
    "asymptotics": dict(n=[100, 400, 1600]),
    "first-row": dict(n=[50], trials=2000),
    "concentration": dict(n=[500], trials=5000, z_re=0.2, z_im=0.1),
    "partial-sum": dict(n=[200, 400, 800]),
    "special-eval": dict(n=[]),
}


class UsageError(Exception):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


# --- coercion / validation -------------------------------------------------


def _int_list(key, v):
    if isinstance(v, (list, tuple)):
        items = list(v)
    elif isinstance(v, str):
        items = [s for s in v.split(",") if s.strip()]
    else:
        items = [v]
    out = []
    for item in items:
        if isinstance(item, bool):
            raise UsageError(key, f"expected integer, got {item!r}")
        try:
            f = float(item)
        except (TypeError, ValueError):
            raise UsageError(key, f"expected integer, got {item!r}") from None
        if not f.is_integer():
            raise UsageError(key, f"expected integer, got {item!r}")
        out.append(int(f))
    return out


def _number(kind):
    def conv(key, v):
        if isinstance(v, bool):
            raise UsageError(key, f"expected {kind.__name__}, got {v!r}")
        try:
            f = float(v)
        except (TypeError, ValueError):
            raise UsageError(key, f"expected {kind.__name__}, got {v!r}") from None
        if kind is int:
            if not f.is_integer():
                raise UsageError(key, f"expected integer, got {v!r}")
            return int(f)
        return f
    return conv


def _float_pair(key, v):
    vals = v.split(",") if isinstance(v, str) else v
    try:
        a, b = (float(x) for x in vals)
    except (TypeError, ValueError):
        raise UsageError(key, f"expected two numbers a,b, got {v!r}") from None
    return [a, b]


def _choice(options):
    def conv(key, v):
        if v not in options:
            raise UsageError(key, f"expected one of {sorted(options)}, got {v!r}")
        return v
    return conv


def _text(key, v):
    if v is not None and not isinstance(v, str):
        raise UsageError(key, f"expected a path string, got {v!r}")
    return v


COERCE = {
    "experiment": _choice(set(EXPERIMENTS)),
    "n": _int_list, "beta": _number(float), "seed": _number(int), "trials": _number(int),
    "epsilon": _number(float), "delta": _number(float), "c": _number(float),
    "grid_re": _number(int), "grid_im": _number(int), "out": _text,
    "format": _choice({"csv", "json"}), "threads": _number(int),
    "k": _number(int), "l": _number(int), "x_min": _number(float), "x_max": _number(float),
    "points": _number(int), "z_re": _number(float), "z_im": _number(float),
    "order": _number(int), "interval": _float_pair, "mu": _number(float),
}


def _validate(cfg):
    def need(key, ok, msg):
        if not ok:
            raise UsageError(key, msg)

    need("n", all(v >= 1 for v in cfg["n"]), "every n must be a positive integer")
    need("beta", cfg["beta"] > 0, "must be positive")
    need("seed", 0 <= cfg["seed"] < 2 ** 64, "must be a non-negative 64-bit integer")
    need("trials", cfg["trials"] >= 1, "must be at least 1")
    need("epsilon", cfg["epsilon"] > 0, "must be positive")
    need("delta", 0 < cfg["delta"] < 1, "must lie in (0, 1)")
    need("c", cfg["c"] > 0, "must be positive")
    need("grid_re", cfg["grid_re"] >= 1, "must be at least 1")
    need("grid_im", cfg["grid_im"] >= 1, "must be at least 1")
    need("threads", cfg["threads"] >= 1, "must be at least 1")
    need("k", cfg["k"] >= 0, "must be non-negative")
    need("points", cfg["points"] >= 1, "must be at least 1")
    need("order", 0 <= cfg["order"] <= 6, "must lie in [0, 6]")
    need("mu", 0 < cfg["mu"] < 1, "must lie in (0, 1)")
    if cfg["z_im"] is not None:
        need("z_im", cfg["z_im"] > 0, "must be positive (upper half-plane)")
    if cfg["interval"] is not None:
        need("interval", cfg["interval"][0] < cfg["interval"][1], "needs a < b")
    exp = cfg["experiment"]
    if exp in ("sample", "spectrum", "stieltjes", "local-law", "counting", "resolvent-expand",
               "first-row", "concentration"):
        need("n", len(cfg["n"]) >= 1, "required")
    trend = ("zero-temp-study", "rigidity", "resolvent-audit", "asymptotics", "partial-sum")
    if exp in trend and not (exp == "partial-sum" and cfg["l"] is not None):
        need("n", len(cfg["n"]) >= 2, "needs at least two values for a trend fit")
    if exp == "zero-temp-study":
        need("n", min(cfg["n"]) >= 50, "every n must be at least 50")
    if exp == "asymptotics":
        need("n", min(cfg["n"]) >= 50, "every degree must be at least 50")
    if exp == "first-row":
        need("trials", cfg["trials"] >= 500, "must be at least 500")
    if exp in ("local-law",) and math.isinf(cfg["beta"]):
        raise UsageError("beta", "must be finite for a Monte Carlo campaign")


def _build_parser():
    p = argparse.ArgumentParser(prog="betaensemble", description=__doc__.split("\n")[0])
    p.add_argument("experiment", nargs="?", help="one of: " + ", ".join(EXPERIMENTS))
    p.add_argument("--config", help="JSON file with configuration values")
    p.add_argument("--n", help="matrix size, or comma-separated sizes for sweeps")
    p.add_argument("--beta")
    p.add_argument("--seed")
    p.add_argument("--trials")
    p.add_argument("--epsilon")
    p.add_argument("--delta")
    p.add_argument("--c")
    p.add_argument("--grid-re", dest="grid_re")
    p.add_argument("--grid-im", dest="grid_im")
    p.add_argument("--out")
    p.add_argument("--format")
    p.add_argument("--threads")
    p.add_argument("--k", help="Hermite degree for special eval")
    p.add_argument("--l", help="second degree for a single partial-sum check")
    p.add_argument("--x-min", dest="x_min")
    p.add_argument("--x-max", dest="x_max")
    p.add_argument("--points")
    p.add_argument("--z-re", dest="z_re")
    p.add_argument("--z-im", dest="z_im")
    p.add_argument("--order", help="expansion order")
    p.add_argument("--interval", help="counting interval a,b")
    p.add_argument("--mu", help="transition-region half width")
    return p


def _normalize_argv(argv):
    argv = list(argv)
    if len(argv) >= 2 and argv[0] == "resolvent" and argv[1] in ("audit", "expand"):
        argv = [f"resolvent-{argv[1]}"] + argv[2:]
    elif len(argv) >= 2 and argv[0] == "special" and argv[1] == "eval":
        argv = ["special-eval"] + argv[2:]
    return argv


def parse_config(argv) -> dict:
    """Merge defaults, the optional JSON config file and flags; validate."""
    ns = _build_parser().parse_args(_normalize_argv(argv))
    file_cfg = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError("config", f"cannot read {ns.config}: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise UsageError("config", "top level must be a JSON object")
        file_cfg = {k.replace("-", "_"): v for k, v in file_cfg.items()}
        for key in file_cfg:
            if key not in COERCE:
                raise UsageError(key, "unknown configuration key")
    flags = {k: v for k, v in vars(ns).items() if k not in ("config",) and v is not None}
    exp = flags.get("experiment", file_cfg.get("experiment"))
    if exp is None:
        raise UsageError("experiment", "missing; choose one of " + ", ".join(EXPERIMENTS))
    exp = COERCE["experiment"]("experiment", exp)
    cfg = dict(GLOBAL_DEFAULTS)
    cfg.update(EXPERIMENT_DEFAULTS[exp])
    cfg["threads"] = ex.default_threads()
    for source in (file_cfg, flags):
        for key, val in source.items():
            cfg[key] = COERCE[key](key, val) if val is not None else None
    cfg["experiment"] = exp
    _validate(cfg)
    return cfg


# --- experiment runners ----------------------------------------------------
# Each returns (rows, summary, passed); passed is None when no threshold applies.


def _params(cfg, n=None):
    return EnsembleParams(n if n is not None else cfg["n"][0], cfg["beta"])


def _run_sample(cfg):
    n = cfg["n"][0]
    if math.isinf(cfg["beta"]):
        m = build_zero_temperature(n)
    else:
        m, _ = build_symmetric(_params(cfg), RngStream(cfg["seed"], 0))
    rows = [{"index": i + 1, "diag": float(m.diag[i]),
             "offdiag": float(m.offdiag[i]) if i < n - 1 else None} for i in range(n)]
    return rows, {"n": n, "beta": cfg["beta"]}, None


def _run_spectrum(cfg):
    n = cfg["n"][0]
    m = build_zero_temperature(n) if math.isinf(cfg["beta"]) else \
        build_symmetric(_params(cfg), RngStream(cfg["seed"], 0))[0]
    sp = spectrum(m)
    rows = [{"j": j + 1, "eig_scaled": float(e), "weight": float(w)}
            for j, (e, w) in enumerate(zip(sp.eigs_scaled, sp.weights))]
    return rows, {"n": n, "weight_sum": float(sp.weights.sum())}, None


def _run_stieltjes(cfg):
    n = cfg["n"][0]
    dom = SpectralDomain.default(n, cfg["epsilon"], cfg["delta"], cfg["grid_re"], cfg["grid_im"])
    z = np.array(dom.grid)
    frozen = math.isinf(cfg["beta"])
    m = build_zero_temperature(n) if frozen else build_symmetric(_params(cfg), RngStream(cfg["seed"], 0))[0]
    s = stieltjes_from_spectrum(spectrum(m), z)
    ssc = semicircle_stieltjes(z)
    ratio = stieltjes_zero_temp_ratio(n, z) if frozen else None
    rows = []
    for i, zz in enumerate(z):
        r = {"z_re": zz.real, "z_im": zz.imag, "s_re": s[i].real, "s_im": s[i].imag,
             "s_sc_re": ssc[i].real, "s_sc_im": ssc[i].imag, "abs_error": abs(s[i] - ssc[i])}
        if frozen:
            r["ratio_re"], r["ratio_im"] = ratio[i].real, ratio[i].imag
        rows.append(r)
    return rows, {"n": n, "sup_error": float(np.max(np.abs(s - ssc)))}, None


def _run_zero_temp(cfg):
    res = ex.zero_temp_convergence_study(cfg["n"], cfg["epsilon"], cfg["delta"], cfg["grid_re"], cfg["grid_im"])
    rows = [{"n": n, "sup_error": e} for n, e in zip(res["ns"], res["sup_error"])]
    th = {"slope_range": [-1.3, -0.7], "sup_error_last_max": 0.02}
    passed = -1.3 <= res["slope"] <= -0.7 and res["sup_error"][-1] < 0.02
    return rows, {**res, "thresholds": th, "passed": passed}, passed


def _run_local_law(cfg):
    sums = ex.deviation_probability_campaign(cfg["n"], cfg["beta"], cfg["c"], cfg["trials"], cfg["seed"],
                                             cfg["epsilon"], cfg["delta"], cfg["grid_re"], cfg["grid_im"],
                                             cfg["threads"])
    rows = []
    for s in sums:
        for r in s.results:
            rows.append({"n": r.n, "trial": r.stream_id, "sup_error": r.sup_error,
                         "valid": r.valid, "message": r.message})
    fr = [s.exceed_fraction for s in sums]
    passed = fr[-1] == 0 and all(b <= a for a, b in zip(fr, fr[1:]))
    summary = {"campaigns": [s.to_dict() for s in sums],
               "thresholds": {"c": cfg["c"], "exceed_fraction_at_largest_n": 0.0,
                              "non_increasing_in_n": True}, "passed": passed}
    return rows, summary, passed


def _run_rigidity(cfg):
    res = ex.rigidity_campaign(cfg["n"], cfg["beta"], cfg["trials"], cfg["seed"], cfg["delta"], cfg["threads"])
    rows = [{"n": n, "median_max_dev": m} for n, m in zip(res["ns"], res["median_max_dev"])]
    passed = -1.3 <= res["slope"] <= -0.7
    return rows, {**res, "thresholds": {"slope_range": [-1.3, -0.7]}, "passed": passed}, passed


def _run_counting(cfg):
    res = ex.counting_campaign(cfg["n"][0], cfg["beta"], cfg["interval"], cfg["trials"], cfg["seed"],
                               threads=cfg["threads"])
    rows = [{"trial": t, "discrepancy": d} for t, d in enumerate(res.pop("discrepancies"))]
    return rows, res, res["passed"]


def _run_audit(cfg):
    res = ex.resolvent_audit_study(cfg["n"], cfg["epsilon"])
    rows = []
    for kind, r in res.items():
        for rep in r["reports"]:
            rows.append({"kind": kind, "n": rep["n"], "constant": rep["fitted_constant"],
                         "max_ratio": rep["max_ratio"], "argmax_k": rep["argmax"]["k"],
                         "argmax_l": rep["argmax"]["l"], "z_re": rep["argmax"]["z_re"],
                         "z_im": rep["argmax"]["z_im"]})
    passed = all(r["spread"] <= 3 and r["max_over_fitted"] <= 10 for r in res.values())
    return rows, {**res, "thresholds": {"spread_max": 3, "ratio_over_fitted_max": 10}, "passed": passed}, passed


def _run_expand(cfg):
    n = cfg["n"][0]
    z = None
    if cfg["z_re"] is not None or cfg["z_im"] is not None:
        z = complex(cfg["z_re"] or 0.0, cfg["z_im"] if cfg["z_im"] is not None else n ** (-0.5 + cfg["epsilon"]))
    else:
        z = complex(0.2, n ** (-0.5 + cfg["epsilon"]))
    res = ex.expansion_study(n, cfg["beta"], cfg["trials"], cfg["seed"], z, cfg["order"], threads=cfg["threads"])
    rows = []
    for t, (mags, rem) in enumerate(zip(res.pop("magnitudes"), res["remainders"])):
        for p, m in enumerate(mags, start=1):
            rows.append({"trial": t, "order": p, "abs_term": m, "abs_remainder": rem})
    res.pop("remainders")
    passed = res["decreasing_fraction"] >= 0.95 and res["truncation_fraction"] >= 0.95
    th = {"decreasing_fraction_min": 0.95, "truncation_fraction_min": 0.95, "truncation_error_max": 0.05}
    return rows, {**res, "thresholds": th, "passed": passed}, passed


def _run_asymptotics(cfg):
    res = ex.asymptotics_validation(cfg["n"], cfg["mu"])
    rows = [{"k": k, "oscillatory_error": a, "transition_error": b, "transition_amplitude": c}
            for k, a, b, c in zip(res["ks"], res["oscillatory_error"], res["transition_error"],
                                  res["transition_amplitude"])]
    passed = abs(res["oscillatory_slope"] + 1) <= 0.3 and abs(res["transition_exponent"] + 1 / 12) <= 0.02
    th = {"oscillatory_slope": "-1 +- 0.3", "transition_exponent": "-1/12 +- 0.02"}
    return rows, {**res, "thresholds": th, "passed": passed}, passed


def _run_first_row(cfg):
    res = ex.first_row_independence_test(_params(cfg), cfg["trials"], cfg["seed"], cfg["threads"])
    passed = res["ks_statistic"] < 0.05
    return [res], {**res, "thresholds": {"ks_max": 0.05}, "passed": passed}, passed


def _run_concentration(cfg):
    n = cfg["n"][0]
    z = complex(cfg["z_re"], cfg["z_im"])
    res = ex.concentration_check(_params(cfg), z, cfg["trials"], cfg["seed"])
    rows = [{"lambda": a, "tail_probability": b} for a, b in zip(res["lambdas"], res["tail"])]
    passed = res["tail_slope"] < -0.3 and res["centered"] and 0.5 <= res["scale_ratio"] <= 2
    th = {"tail_slope_max": -0.3, "scale_ratio_range": [0.5, 2]}
    return rows, {**res, "n": n, "thresholds": th, "passed": passed}, passed


def _run_partial_sum(cfg):
    if cfg["l"] is not None:
        n = cfg["n"][0]
        r = ex.partial_sum_bound_check(n, cfg["k"], cfg["l"])
        return [{"n": n, "k": cfg["k"], "l": cfg["l"], "ratio": r}], {"ratio": r}, None
    res = ex.partial_sum_study(cfg["n"])
    rows = [{"n": n, "max_ratio": r} for n, r in zip(res["ns"], res["max_ratio"])]
    passed = res["spread"] <= 3
    return rows, {**res, "thresholds": {"spread_max": 3}, "passed": passed}, passed


def _run_special_eval(cfg):
    k, mu = cfg["k"], cfg["mu"]
    rk = math.sqrt(k)
    lo = cfg["x_min"] if cfg["x_min"] is not None else -1.3 * rk - 1
    hi = cfg["x_max"] if cfg["x_max"] is not None else 1.3 * rk + 1
    xs = np.linspace(lo, hi, cfg["points"])
    rows = []
    for x in xs:
        e = hermite_function(k, x)
        ax = abs(x)
        approx = None
        if k >= 1 and ax < rk * (1 - mu):
            approx = pr_oscillatory(k, x, mu)
        elif k >= 1 and rk * (1 - mu) < ax < rk * (1 + mu):
            approx = pr_transition(k, x, mu)
        rows.append({"x": float(x), "E_k": e, "pr_approx": approx,
                     "abs_error": abs(approx - e) if approx is not None else None})
    return rows, {"k": k, "mu": mu, "points": len(rows)}, None


RUNNERS = {
    "sample": _run_sample, "spectrum": _run_spectrum, "stieltjes": _run_stieltjes,
    "zero-temp-study": _run_zero_temp, "local-law": _run_local_law, "rigidity": _run_rigidity,
    "counting": _run_counting, "resolvent-audit": _run_audit, "resolvent-expand": _run_expand,
    "asymptotics": _run_asymptotics, "first-row": _run_first_row, "concentration": _run_concentration,
    "partial-sum": _run_partial_sum, "special-eval": _run_special_eval,
}


def _write(cfg, rows, summary, status):
    out = cfg["out"]
    if cfg["format"] == "json":
        emit(out, render_json(cfg, {"rows": rows, "summary": summary}, status))
        return
    emit(out, render_csv(cfg, rows, status))
    if out is None or out == "-":
        sys.stdout.write("# summary: " + render_json(cfg, summary, status).replace("\n", " ") + "\n")
    else:
        emit(summary_path(out), render_json(cfg, summary, status))


def run(cfg: dict) -> int:
    """Execute one configured experiment; returns the process exit code."""
    try:
        rows, summary, passed = RUNNERS[cfg["experiment"]](cfg)
    except (ArithmeticError, ValueError, OSError) as exc:
        msg = f"{type(exc).__name__}: {exc}"
        try:
            _write(cfg, [], {"error": msg}, "failed")
        except OSError:
            pass
        print(f"betaensemble: {msg}", file=sys.stderr)
        return 2
    _write(cfg, rows, summary, "ok")
    return 1 if passed is False else 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"betaensemble: usage error: {exc}", file=sys.stderr)
        return 2
    except (InvalidParameterError, InvalidInputError) as exc:
        print(f"betaensemble: usage error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
