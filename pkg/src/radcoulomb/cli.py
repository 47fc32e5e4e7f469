"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 numeric failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .counterexample import DEFAULT_EPSILONS, fit_slope, run_sweep, sweep_csv_text
from .exponents import exponent_set, nonradial_endpoint, radial_endpoint, sobolev_endpoint
from .functionals import functional_report
from .optimize import OptimizerConfig, best_constant_search
from .profiles import load_profile
from .quadrature import QuadratureSpec
from .verification import SUITES, figure1_grid, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS: dict[str, Any] = {
    "quad_rel_tol": 1e-8,
    "quad_abs_tol": 1e-14,
    "seed": 42,
    "threads": 1,
    "out": None,
    # norms
    "profile": "builtin:gaussian",
    "s": None,
    "p": None,
    # sweep
    "eps": ",".join(str(e) for e in DEFAULT_EPSILONS),
    # best-constant
    "two_p": None,
    "family": "gaussians:4",
    "restarts": 8,
    "max_iters": 4000,
    # verify
    "suite": "all",
    "tol": None,
    # exponents
    "q": None,
    "a": None,
    "gamma": None,
    "figure1_csv": None,
}


COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {"norms": {"p": "2"}}


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _exact(text) -> Fraction | float:
    """Parse ``18/7`` or ``0.75`` exactly; fall back to float."""
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        return float(text)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--quad-rel-tol", type=float, default=None)
    g.add_argument("--quad-abs-tol", type=float, default=None)
    g.add_argument("--out", default=None, help="output file (stdout when omitted)")
    g.add_argument("--config", default=None, help="JSON file of option defaults, or a run manifest")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--threads", type=int, default=None)

    parser = argparse.ArgumentParser(prog="radcoulomb", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norms", parents=[common], help="norms and energies of one profile")
    p.add_argument("--profile", default=None, help="builtin alias, inline JSON or JSON file")
    p.add_argument("--s", default=None)
    p.add_argument("--p", default=None, help="comma-separated L^p exponents")

    p = sub.add_parser("sweep", parents=[common], help="counterexample tent sweep (CSV)")
    p.add_argument("--s", default=None)
    p.add_argument("--p", default=None)
    p.add_argument("--eps", default=None, help="comma-separated epsilons")

    p = sub.add_parser("best-constant", parents=[common], help="best-constant search over Gaussian mixtures")
    p.add_argument("--s", default=None)
    p.add_argument("--two-p", default=None)
    p.add_argument("--family", default=None, help="gaussians:M")
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=None)

    p = sub.add_parser("verify", parents=[common], help="run a check suite")
    p.add_argument("--suite", default=None, help=f"one of {', '.join([*SUITES, 'all'])}")
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("exponents", parents=[common], help="exponent formulas and Figure-1 curves")
    p.add_argument("--s", default=None)
    p.add_argument("--p", default=None)
    p.add_argument("--q", default=None)
    p.add_argument("--a", default=None)
    p.add_argument("--gamma", default=None)
    p.add_argument("--figure1-csv", default=None)
    return parser


def _load_config(path: str | None) -> dict[str, Any]:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    if "parameters" in data and "subcommand" in data:  # a manifest
        data = data["parameters"]
    return {k.replace("-", "_"): v for k, v in data.items()}


def _resolve(args: argparse.Namespace) -> dict[str, Any]:
    """flags > config file > built-in defaults."""
    config = _load_config(args.config)
    defaults = DEFAULTS | COMMAND_DEFAULTS.get(args.command, {})
    out = {}
    for key, val in vars(args).items():
        if key in ("command", "config"):
            continue
        if val is None:
            val = config.get(key, defaults.get(key))
        out[key] = val
    return out


def _quad(opts: dict[str, Any]) -> QuadratureSpec:
    try:
        return QuadratureSpec(rel_tol=float(opts["quad_rel_tol"]), abs_tol=float(opts["quad_abs_tol"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _json_text(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=True) + "\n"


def _emit(text: str, opts: dict[str, Any], command: str, started: float, extra_outputs: Sequence[str] = ()) -> None:
    out = opts.get("out")
    if not out:
        sys.stdout.write(text)
        return
    Path(out).write_text(text)
    _write_manifest(out, command, opts, started, [out, *extra_outputs])


def _write_manifest(out: str, command: str, opts: dict[str, Any], started: float, outputs: Sequence[str]) -> None:
    manifest = {
        "subcommand": command,
        "parameters": {k: v for k, v in opts.items() if k != "out"} | {"out": out},
        "profile_source": opts.get("profile") if command == "norms" else None,
        "outputs": list(outputs),
        "quad": {"rel_tol": opts["quad_rel_tol"], "abs_tol": opts["quad_abs_tol"]},
        "seed": opts["seed"],
        "version": __version__,
        "wall_clock_s": round(time.monotonic() - started, 3),
    }
    Path(str(out) + ".manifest.json").write_text(_json_text(manifest))


def _require(opts: dict[str, Any], *keys: str) -> None:
    missing = [k for k in keys if opts.get(k) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


# ---------------------------------------------------------------------------
# subcommands


def cmd_norms(opts: dict[str, Any], started: float) -> int:
    _require(opts, "s")
    try:
        profile = load_profile(opts["profile"])
    except (ValueError, TypeError, KeyError, OSError) as exc:
        raise UsageError(f"invalid profile: {exc}") from exc
    s = float(_exact(opts["s"]))
    if not 0 < s < 1.5:
        raise UsageError("--s must lie in (0, 3/2)")
    ps = _floats(opts["p"])
    if any(p < 1 for p in ps):
        raise UsageError("every --p must be >= 1")
    quad = _quad(opts)
    rep = functional_report(profile, s, ps, quad, profile_id=str(opts["profile"]))
    data = rep.to_json()
    numbers = [v for v in data.values() if isinstance(v, float)]
    if not all(math.isfinite(v) for v in numbers):
        raise NumericFailure("non-finite functional value")
    for key in data["flagged"]:
        print(f"warning: quadrature error estimate above tolerance for {key}", file=sys.stderr)
    _emit(_json_text(data), opts, "norms", started)
    return EXIT_OK


def cmd_sweep(opts: dict[str, Any], started: float) -> int:
    _require(opts, "s", "p")
    s, p = float(_exact(opts["s"])), float(_exact(opts["p"]))
    eps = _floats(opts["eps"])
    try:
        records = run_sweep(s, p, eps, _quad(opts), threads=int(opts["threads"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not all(math.isfinite(getattr(r, c)) for r in records for c in ("hs_norm_sq", "coulomb", "lp_norm_p")):
        raise NumericFailure("non-finite sweep value")
    summary: dict[str, Any] = {
        "s": s,
        "p": p,
        "radial_endpoint": float(radial_endpoint(s)),
        "records": len(records),
        "flags": {f"{r.epsilon:.17g}": list(r.flags) for r in records if r.flags},
    }
    slope_error = None
    try:
        measured, predicted = fit_slope(records, p, s)
        summary.update(measured_slope=measured, predicted_slope=predicted)
    except ValueError as exc:
        slope_error = str(exc)
        summary["slope_error"] = slope_error
    lr = [r.lemma_ratio for r in records]
    summary["lemma_band"] = max(lr) / min(lr)
    text = sweep_csv_text(records)
    out = opts.get("out")
    if out:
        summary_path = str(Path(out).with_suffix("")) + ".summary.json"
        Path(summary_path).write_text(_json_text(summary))
        _emit(text, opts, "sweep", started, extra_outputs=[summary_path])
    else:
        sys.stdout.write(text)
        print(_json_text(summary), file=sys.stderr, end="")
    if slope_error:
        print(f"error: {slope_error}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _family_size(text: str) -> int:
    kind, _, m = str(text).partition(":")
    if kind != "gaussians":
        raise UsageError(f"unknown family {text!r}; expected gaussians:M")
    try:
        size = int(m or 4)
    except ValueError as exc:
        raise UsageError(f"bad family size in {text!r}") from exc
    if size < 1:
        raise UsageError("family size must be positive")
    return size


def cmd_best_constant(opts: dict[str, Any], started: float) -> int:
    _require(opts, "s", "two_p")
    s, two_p = _exact(opts["s"]), _exact(opts["two_p"])
    if 0.5 < s < 1.5 and two_p == sobolev_endpoint(s):
        raise UsageError(f"2p = {two_p} is the Sobolev endpoint 6/(3-2s); "
                         "attainment of the best constant is excluded there")
    cfg = OptimizerConfig(
        m=_family_size(opts["family"]),
        restarts=int(opts["restarts"]),
        max_iters=int(opts["max_iters"]),
        seed=int(opts["seed"]),
        threads=int(opts["threads"]),
    )
    try:
        res = best_constant_search(float(s), float(two_p), cfg, _quad(opts))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not math.isfinite(res.best_J):
        raise NumericFailure("search produced a non-finite quotient")
    if res.stagnated:
        print("warning: no restart improved on the Gaussian", file=sys.stderr)
    _emit(_json_text(res.to_json()), opts, "best-constant", started)
    return EXIT_OK


def cmd_verify(opts: dict[str, Any], started: float) -> int:
    suite = opts["suite"]
    if suite not in (*SUITES, "all"):
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join([*SUITES, 'all'])}")
    checks = run_suite(suite, opts["tol"], _quad(opts))
    lines = [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    _emit("\n".join(lines) + "\n", opts, "verify", started)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_exponents(opts: dict[str, Any], started: float) -> int:
    if opts["s"] is None and not opts["figure1_csv"]:
        raise UsageError("give --s and/or --figure1-csv")
    if opts["figure1_csv"]:
        path = opts["figure1_csv"]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["s", "radial_endpoint", "sobolev_endpoint", "nonradial_endpoint"])
            for s in figure1_grid():
                w.writerow([f"{float(v):.17g}" for v in
                            (s, radial_endpoint(s), sobolev_endpoint(s), nonradial_endpoint(s))])
        _write_manifest(path, "exponents", opts, started, [path])
    if opts["s"] is None:
        return EXIT_OK
    s = _exact(opts["s"])
    if not 0.5 < s < 1.5:
        raise UsageError("--s must lie in (1/2, 3/2)")
    kw = {k: _exact(opts[k]) for k in ("p", "q", "a", "gamma") if opts[k] is not None}
    try:
        es = exponent_set(s, **kw)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc
    if opts.get("out"):
        _emit(_json_text(es.to_json()), opts, "exponents", started)
    else:
        rows = es.rows()
        width = max(len(k) for k, _ in rows)
        sys.stdout.write("".join(f"{k:<{width}}  {v}\n" for k, v in rows))
    return EXIT_OK


COMMANDS = {
    "norms": cmd_norms,
    "sweep": cmd_sweep,
    "best-constant": cmd_best_constant,
    "verify": cmd_verify,
    "exponents": cmd_exponents,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2
        return int(exc.code or 0)
    started = time.monotonic()
    try:
        opts = _resolve(args)
        if opts["threads"] is not None and int(opts["threads"]) < 1:
            raise UsageError("--threads must be >= 1")
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](opts, started)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericFailure, ArithmeticError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
