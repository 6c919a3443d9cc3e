"""Command-line experiment runner.

Usage::

    schrodinger-lab <kind> [--config FILE] [--set key=value ...] [--out DIR]
                    [--seed N] [--threads N] [--format csv|text]

Config files are INI with a single ``[experiment]`` section; every key must
belong to the chosen experiment (see ``SCHEMAS``).  Exit status is 0 when every
metric passes, 1 when one falls outside its tolerance and 2 on invalid
configuration.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import counterexample as cx
from .maximal import MIN_SCALE_SPAN, continuum_maximal, decompose_E123, growth_exponent_fit, maximal_profile, profile_l2, ratio_Hs, weak_level_measure
from .probes import random_trig
from .propagator import evolve
from .report import ExperimentReport, Metric, emit_report
from .sequences import (
    TimeSequence,
    critical_exponent,
    generate_sequence,
    is_decreasing_convex,
    lorentz_quasinorm,
    read_sequence,
)
from .spectral import GridSpec, l2_norm, synthesize

log = logging.getLogger("schrodinger_lab")

KINDS = ("propagate", "maximal", "scaling", "counterexample", "classify", "decompose")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


_SEQ = {
    "sequence": (str, "power"),
    "gamma": (float, 1.0),
    "q": (float, 0.5),
    "n_terms": (int, 1000),
    "sequence_file": (str, ""),
}
_GRID = {
    "n_points": (int, 1024),
    "period": (float, 16 * math.pi),
    "top": (float, 40.0),
    "decay": (float, 0.0),
}

SCHEMAS = {
    "propagate": {"a": (float, 2.0), "t": (float, 0.1), **_GRID},
    "maximal": {
        "a": (float, 2.0), "s": (float, 1 / 3), "alpha": (float, 0.5), "mode": (str, "sequence"),
        "oversample": (int, 4), **_SEQ, **_GRID,
    },
    "scaling": {
        "a": (float, 2.0), "r": (float, 1.0), "lambdas": (_floats, [2.0**k for k in range(6, 13)]),
        "probes": (_floats, [0.25, 0.5, 1.0]), "depth": (float, 20.0), "n_random": (int, 0),
        "slope_tol": (float, 0.08),
    },
    "counterexample": {
        "a": (float, 2.0), "s": (float, 0.2), "steps": (int, 3), "x_samples": (int, 100),
        "epsilon": (float, 0.0), "m_ratio": (float, 4.0), "min_sup_floor": (float, 0.48),
        "growth_floor": (float, 1.0), **{**_SEQ, "gamma": (float, 2.0), "n_terms": (int, 8_000_000)},
    },
    "classify": {"r": (float, 0.0), "expect_exponent": (float, math.nan), "exponent_tol": (float, 0.05), **{**_SEQ, "n_terms": (int, 100_000)}},
    "decompose": {
        "a": (float, 2.0), "r": (float, 1.0), "n_functions": (int, 10), "spread_limit": (float, 10.0),
        **{**_SEQ, "n_terms": (int, 256)}, **{**_GRID, "n_points": (int, 512), "top": (float, 64.0)},
    },
}
for _schema in SCHEMAS.values():
    _schema["seed"] = (int, 0)


def _load_config(path) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config: file {path} does not exist")
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(p.read_text(), source=str(p))
    except configparser.Error as exc:
        raise ConfigError(f"config: {exc}") from exc
    sections = cp.sections()
    if sections != ["experiment"]:
        raise ConfigError(f"config: expected a single [experiment] section, found {sections}")
    return dict(cp["experiment"])


def build_config(kind: str, raw: dict) -> dict:
    """Apply the schema: reject unknown keys, convert types, fill defaults, check ranges."""
    if kind not in SCHEMAS:
        raise ConfigError(f"kind: unknown experiment {kind!r}; choose from {', '.join(KINDS)}")
    schema = SCHEMAS[kind]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown key for {kind} (allowed: {', '.join(sorted(schema))})")
    cfg = {}
    for key, (conv, default) in schema.items():
        if key in raw:
            try:
                cfg[key] = conv(raw[key])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key}: cannot parse {raw[key]!r} ({exc})") from exc
        else:
            cfg[key] = list(default) if isinstance(default, list) else default
    _validate(kind, cfg)
    return cfg


def _require(cond, key, msg):
    if not cond:
        raise ConfigError(f"{key}: {msg}")


def _validate(kind, cfg):
    if "a" in cfg:
        _require(cfg["a"] > 0 and math.isfinite(cfg["a"]), "a", "must be positive")
    if "n_points" in cfg:
        n = cfg["n_points"]
        _require(n >= 8 and n & (n - 1) == 0, "n_points", "must be a power of two >= 8")
        _require(cfg["period"] > 0, "period", "must be positive")
        _require(cfg["top"] > 0, "top", "must be positive")
    if "sequence" in cfg:
        _require(cfg["sequence"] in ("power", "power_log", "geometric"), "sequence", "must be power, power_log or geometric")
        _require(cfg["n_terms"] >= 2, "n_terms", "must be at least 2")
        _require(cfg["gamma"] > 0, "gamma", "must be positive")
        _require(0 < cfg["q"] < 1, "q", "must lie in (0, 1)")
        if cfg["sequence_file"]:
            _require(Path(cfg["sequence_file"]).is_file(), "sequence_file", f"{cfg['sequence_file']} does not exist")
    if kind == "propagate":
        _require(cfg["t"] >= 0, "t", "must be nonnegative")
    if kind == "maximal":
        _require(cfg["mode"] in ("sequence", "interval"), "mode", "must be sequence or interval")
        _require(cfg["oversample"] >= 4, "oversample", "must be at least 4")
        _require(cfg["alpha"] > 0, "alpha", "must be positive")
    if kind == "scaling":
        lams = cfg["lambdas"]
        _require(len(lams) >= 4 and min(lams) >= 1 and max(lams) / min(lams) >= MIN_SCALE_SPAN, "lambdas", f"need >= 4 scales >= 1 spanning a factor {MIN_SCALE_SPAN:g}")
        _require(cfg["r"] > 0, "r", "must be positive")
        _require(cfg["probes"] and min(cfg["probes"]) > 0, "probes", "width multipliers must be positive")
        _require(cfg["depth"] >= 1, "depth", "must be at least 1")
    if kind == "counterexample":
        a, s = cfg["a"], cfg["s"]
        if a == 1:
            _require(0 < s < 0.5, "s", "must lie in (0, 1/2) for a = 1")
        else:
            _require(0 < s < a / 4, "s", f"must lie in (0, a/4) = (0, {a / 4:g})")
            eps = cfg["epsilon"]
            _require(eps == 0 or 0 < eps < 1 / (10 * (a + 2)), "epsilon", f"must lie in (0, {1 / (10 * (a + 2)):g}) (0 selects the default)")
        _require(cfg["steps"] >= 1, "steps", "must be positive")
        _require(cfg["x_samples"] >= 1, "x_samples", "must be positive")
        _require(cfg["m_ratio"] > 1, "m_ratio", "must exceed 1")
    if kind == "classify":
        _require(cfg["r"] >= 0, "r", "must be nonnegative (0 uses the fitted exponent)")
        _require(cfg["n_terms"] >= 100 or cfg["sequence_file"], "n_terms", "must be at least 100")
    if kind == "decompose":
        _require(cfg["r"] > 0, "r", "must be positive")
        _require(cfg["n_functions"] >= 1, "n_functions", "must be positive")


def _sequence(cfg) -> TimeSequence:
    if cfg["sequence_file"]:
        return read_sequence(cfg["sequence_file"])
    return generate_sequence(cfg["sequence"], cfg["n_terms"], gamma=cfg["gamma"], q=cfg["q"])


def _map(func, items, threads):
    if threads <= 1:
        return [func(v) for v in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _grid_function(cfg, rng):
    grid = GridSpec(cfg["n_points"], cfg["period"])
    return random_trig(grid, rng, cfg["top"], cfg["decay"])


# -- experiments -----------------------------------------------------------------


def _propagate(cfg, threads):
    rng = np.random.default_rng(cfg["seed"])
    f = _grid_function(cfg, rng)
    g = evolve(f, cfg["t"], cfg["a"])
    u0, u1 = synthesize(f), synthesize(g)
    rows = [
        {"x": float(x), "re": float(v.real), "im": float(v.imag), "modulus": float(abs(v))}
        for x, v in zip(f.grid.x, u1)
    ]
    metrics = [Metric("norm_ratio_error", abs(l2_norm(g) / l2_norm(f) - 1), None, 1e-12)]
    if cfg["t"] == 0:
        metrics.append(Metric("identity_max_deviation", float(np.max(np.abs(u1 - u0))), None, 0.0))
    return ("x", "re", "im", "modulus"), rows, metrics, {}


def _maximal(cfg, threads):
    rng = np.random.default_rng(cfg["seed"])
    f = _grid_function(cfg, rng)
    a = cfg["a"]
    if cfg["mode"] == "sequence":
        seq = _sequence(cfg)
        prof = maximal_profile(f, seq, a)
    else:
        prof = continuum_maximal(f, a, (0.0, 1.0), cfg["oversample"])
    l2 = profile_l2(prof)
    alpha = cfg["alpha"] * float(prof.values.max())
    meas = weak_level_measure(prof, alpha)
    rows = [
        {"x": float(x), "value": float(v), "argmax_n": int(n)}
        for x, v, n in zip(prof.grid.x, prof.values, prof.argmax)
    ]
    metrics = [
        Metric("profile_l2", l2),
        Metric("ratio_Hs", ratio_Hs(f, prof, cfg["s"])),
        Metric("chebyshev_slack", l2**2 - alpha**2 * meas, 0.0, None),
    ]
    info = {"level": alpha, "level_measure": meas, "times_used": prof.n_times, "time_cutoff": prof.time_cutoff}
    return ("x", "value", "argmax_n"), rows, metrics, info


def _scaling(cfg, threads):
    a, r = cfg["a"], cfg["r"]
    lams = sorted(cfg["lambdas"])
    e = a / (1 + 2 * r) if a != 1 else 1 / (1 + r)
    t_floor = max(lams) ** (-e) / cfg["depth"]
    # t_n = n^(-1/r) sits on the boundary of l^{r,inf}
    n_terms = int(math.ceil(t_floor ** (-r))) + 2
    seq = generate_sequence("power", n_terms, gamma=1.0 / r)
    fit = growth_exponent_fit(
        a, seq, lams, r, tuple(cfg["probes"]), depth=cfg["depth"], n_random=cfg["n_random"], seed=cfg["seed"]
    )
    rows = list(fit.rows())
    tol = cfg["slope_tol"]
    metrics = [Metric("fitted_slope", fit.slope, fit.target - tol, fit.target + tol)]
    info = {"target": fit.target, "ci_low": fit.ci[0], "ci_high": fit.ci[1], "low_confidence": fit.low_confidence}
    return ("lambda", "ratio", "log_lambda", "log_ratio", "fitted_slope"), rows, metrics, info


def _counterexample(cfg, threads):
    a, s = cfg["a"], cfg["s"]
    seq = _sequence(cfg)
    try:
        if a == 1:
            sched = cx.build_schedule_a1(seq, s, cfg["steps"], m_ratio=cfg["m_ratio"])
            reps = _map(lambda p: cx.a1_counterexample(p, seq, x_samples=cfg["x_samples"]), sched, threads)
            rows = [
                {"j": j, "b": p.b, "M": p.M, "lambda": p.lam, "rho": math.nan, "interval_length": p.b / 2,
                 "min_sup": rep.min_sup, "weak_constant": rep.weak_constant}
                for j, (p, rep) in enumerate(zip(sched, reps))
            ]
        else:
            eps = cfg["epsilon"] or None
            sched = cx.build_schedule(seq, a, s, cfg["steps"], epsilon=eps, m_ratio=cfg["m_ratio"])
            reps = _map(lambda p: cx.verify_lower_bound(p, seq, cfg["x_samples"]), sched, threads)
            rows = [rep.row(j) for j, rep in enumerate(reps)]
    except cx.PreconditionError as exc:
        raise ConfigError(f"sequence: {exc}") from exc
    weak = [row["weak_constant"] for row in rows]
    growth = min((w1 / w0 for w0, w1 in zip(weak, weak[1:])), default=math.inf)
    # the weak constant must increase strictly, whatever the floor
    floor = max(cfg["growth_floor"], math.nextafter(1.0, math.inf))
    metrics = [
        Metric("min_sup", min(row["min_sup"] for row in rows), cfg["min_sup_floor"], None),
        Metric("weak_constant_growth", growth, floor, None),
    ]
    verdict = cx.sharpness_verdict(cfg["gamma"], a, s) if not cfg["sequence_file"] and cfg["sequence"] == "power" else None
    info = {"threshold": verdict.threshold if verdict else math.nan, "side": verdict.side if verdict else "n/a"}
    return cx.SCHEDULE_COLUMNS, rows, metrics, info


def _classify(cfg, threads):
    seq = _sequence(cfg)
    import warnings

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r_hat = critical_exponent(seq)
    convex, where = is_decreasing_convex(seq)
    r = cfg["r"] or r_hat
    metrics = []
    if not math.isnan(cfg["expect_exponent"]):
        tol = cfg["exponent_tol"]
        metrics.append(Metric("critical_exponent", r_hat, cfg["expect_exponent"] - tol, cfg["expect_exponent"] + tol))
    else:
        metrics.append(Metric("critical_exponent", r_hat))
    info = {
        "convex": convex,
        "first_violation": -1 if where is None else where,
        "quasinorm_r": r,
        "quasinorm": lorentz_quasinorm(seq, r),
        "low_confidence": bool(caught),
        "n_terms": len(seq),
    }
    rows = [{"n": int(n), "t": float(v)} for n, v in enumerate(seq.values[:: max(1, len(seq) // 1000)])]
    return ("n", "t"), rows, metrics, info


def _decompose(cfg, threads):
    rng = np.random.default_rng(cfg["seed"])
    seq = _sequence(cfg)
    funcs = [_grid_function({**cfg, "decay": float(rng.uniform(0, 1.5))}, rng) for _ in range(cfg["n_functions"])]
    reps = _map(lambda f: decompose_E123(f, seq, cfg["a"], cfg["r"]), funcs, threads)
    rows = [
        {"index": i, "E1_ratio": rep.ratios[0], "E2_ratio": rep.ratios[1], "E3_ratio": rep.ratios[2],
         "domination_gap": rep.domination_gap}
        for i, rep in enumerate(reps)
    ]
    ratios = np.array([rep.ratios for rep in reps])
    spread = []
    for col in ratios.T:
        pos = col[col > 0]
        spread.append(float(pos.max() / pos.min()) if pos.size else 1.0)
    metrics = [
        Metric("max_domination_gap", max(rep.domination_gap for rep in reps), None, 1e-8),
        *(Metric(f"E{i + 1}_ratio_spread", v, None, cfg["spread_limit"]) for i, v in enumerate(spread)),
    ]
    return ("index", "E1_ratio", "E2_ratio", "E3_ratio", "domination_gap"), rows, metrics, {"s": reps[0].s}


RUNNERS = {
    "propagate": _propagate,
    "maximal": _maximal,
    "scaling": _scaling,
    "counterexample": _counterexample,
    "classify": _classify,
    "decompose": _decompose,
}


def run_experiment(kind: str, config: dict, threads: int = 1) -> ExperimentReport:
    """Run a validated config (see :func:`build_config`) and collect the report."""
    start = time.perf_counter()
    try:
        columns, rows, metrics, info = RUNNERS[kind](config, threads)
    except ConfigError:
        raise
    except (ValueError, ArithmeticError) as exc:
        raise RuntimeError(f"{kind} experiment failed: {exc}") from exc
    elapsed = time.perf_counter() - start
    return ExperimentReport(kind, dict(config), tuple(columns), rows, metrics, info, {"total_seconds": elapsed})


def _parser():
    p = argparse.ArgumentParser(prog="schrodinger-lab", description="Maximal-function experiments for fractional Schrodinger means.")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--config", help="INI file with an [experiment] section")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, help="random seed (overrides the config)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("csv", "text"), default="csv")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        if args.threads < 1:
            raise ConfigError("threads: must be at least 1")
        raw = _load_config(args.config)
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set: expected KEY=VALUE, got {item!r}")
            k, v = item.split("=", 1)
            raw[k.strip()] = v.strip()
        if args.seed is not None:
            raw["seed"] = str(args.seed)
        cfg = build_config(args.kind, raw)
        report = run_experiment(args.kind, cfg, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    paths = emit_report(report, args.out, args.format)
    log.info("%s finished in %.2fs", args.kind, report.timings["total_seconds"])
    for m in report.metrics:
        print(f"{m.name} = {m.value!r} {'PASS' if m.passed else 'FAIL'}")
    for path in paths:
        print(f"wrote {path}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
