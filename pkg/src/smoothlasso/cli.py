"""Command-line front end: ``smoothlasso {fit,path,select,check,simulate}``.

Exit codes: 0 on success, 1 on usage or input errors, 2 when the numerical
routines raise a :class:`SmoothLassoError`.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .core import PenaltySpec, fusion_Jtilde, gram, standardize
from .errors import SmoothLassoError
from .io import fmt, load_xy, read_vector
from .selection import DEFAULT_MU_GRID, Method, select_model
from .simbench import BENCH_METHODS, default_out_dir, run_benchmark, write_summary
from .slasso import family_path, fit
from .theory import (DEFAULT_ALPHA, OracleModel, check_assumptions, check_selection_conditions,
                     fusion_constants, gamma_interval_all, si_bounds, supnorm_bounds)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _float_list(text):
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _nonneg(text):
    v = float(text)
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a finite nonnegative number, got {text}")
    return v


def _positive(text):
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a finite positive number, got {text}")
    return v


def _pos_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _add_data_args(sp):
    sp.add_argument("--data", required=True, help="CSV of covariates (header row optional)")
    sp.add_argument("--response", help="CSV with the response; if omitted the data file holds it")
    sp.add_argument("--response-col", help="response column (name or index) in --data; default last")


def _add_method(sp, default="slasso"):
    sp.add_argument("--method", default=default, choices=[m.value for m in Method])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="smoothlasso", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("fit", help="estimate at one (lambda, mu); JSON to stdout")
    _add_data_args(sp)
    sp.add_argument("--lambda", dest="lam", type=_nonneg, required=True)
    sp.add_argument("--mu", type=_nonneg, default=0.0)
    _add_method(sp)

    sp = sub.add_parser("path", help="knot table of the path at fixed mu; CSV")
    _add_data_args(sp)
    sp.add_argument("--mu", type=_nonneg, default=0.0)
    _add_method(sp)
    sp.add_argument("--out", help="output file (default stdout)")

    sp = sub.add_parser("select", help="BIC selection over path knots and a mu grid; JSON")
    _add_data_args(sp)
    sp.add_argument("--sigma2", type=_positive, required=True, help="known noise variance")
    sp.add_argument("--mu-grid", type=_float_list, default=DEFAULT_MU_GRID)
    _add_method(sp, default="ns")
    sp.add_argument("--trace", help="also write the full BIC trace to this CSV")

    sp = sub.add_parser("check", help="selection conditions, assumptions and bounds; JSON")
    _add_data_args(sp)
    sp.add_argument("--oracle", required=True, help="CSV with the true coefficient vector")
    sp.add_argument("--lambda", dest="lam", type=_positive, required=True)
    sp.add_argument("--mu", type=_nonneg, default=0.0)
    sp.add_argument("--sigma", type=_positive, default=1.0)
    sp.add_argument("--kappa1", type=_positive, default=3.0)
    sp.add_argument("--kappa2", type=_positive, default=1.0)
    sp.add_argument("--kappa3", type=_positive, default=1.0)
    sp.add_argument("--alpha", type=_positive, default=DEFAULT_ALPHA)

    sp = sub.add_parser("simulate", help="Monte Carlo benchmark; writes CSV tables")
    sp.add_argument("--scenario", action="append", required=True,
                    help="a, b, c or d; repeat or comma-separate for several")
    sp.add_argument("--reps", type=_pos_int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None,
                    help="output directory (default $SMOOTHLASSO_OUT or ./results)")
    sp.add_argument("--jobs", type=_pos_int, default=1)
    sp.add_argument("--mu-grid", type=_float_list, default=DEFAULT_MU_GRID)
    sp.add_argument("--methods", default=",".join(m.value for m in BENCH_METHODS),
                    help="comma-separated subset of " + ",".join(m.value for m in Method))
    sp.add_argument("--figures", action="store_true", help="also write gnuplot data files")
    return parser


def _load(args):
    X, Y, names = load_xy(args.data, args.response, args.response_col)
    return standardize(X, Y), names


def _method_penalty(method: Method, lam: float, mu: float) -> PenaltySpec:
    return PenaltySpec(lam=lam, mu=0.0 if method is Method.LASSO else mu, kind=method.kind)


def _path(data, method, mu):
    return family_path(data, 0.0 if method is Method.LASSO else mu, method.kind, method.scaling)


def _cmd_fit(args, out):
    data, names = _load(args)
    method = Method(args.method)
    penalty = _method_penalty(method, args.lam, args.mu)
    f = fit(data, penalty, method.scaling)
    coef, intercept = data.to_original(f.beta)
    doc = {
        "method": method.value,
        "lambda": penalty.lam,
        "mu": penalty.mu,
        "coefficients": f.beta.tolist(),
        "coefficients_original": coef.tolist(),
        "intercept": intercept,
        "active_set": list(f.active_set),
        "kkt_residual": f.kkt_residual,
    }
    if names:
        doc["names"] = list(names)
    json.dump(doc, out, indent=2)
    out.write("\n")


def _cmd_path(args, out):
    data, names = _load(args)
    method = Method(args.method)
    path = _path(data, method, args.mu)
    labels = list(names) if names else [f"beta{j + 1}" for j in range(data.p)]
    fh = open(args.out, "w", newline="") if args.out else out
    try:
        w = csv.writer(fh)
        w.writerow(["knot", "lambda", "active_size"] + labels)
        for k, (lam, b) in enumerate(zip(path.knots, path.vertices)):
            w.writerow([k, fmt(lam), int(np.count_nonzero(b))] + [fmt(x) for x in b])
    finally:
        if args.out:
            fh.close()


def _cmd_select(args, out):
    data, names = _load(args)
    method = Method(args.method)
    res = select_model(data, args.mu_grid, method, args.sigma2)
    if args.trace:
        res.write_trace_csv(args.trace)
    doc = {
        "method": method.value,
        "best_lambda": res.best_lambda,
        "best_mu": res.best_mu,
        "bic": res.bic_value,
        "coefficients": res.best_fit.beta.tolist(),
        "active_set": list(res.best_fit.active_set),
        "kkt_residual": res.best_fit.kkt_residual,
        "grid_points": len(res.grid_trace),
    }
    json.dump(doc, out, indent=2)
    out.write("\n")


def _cmd_check(args, out):
    data, _ = _load(args)
    beta_star = read_vector(args.oracle)
    if beta_star.size != data.p:
        raise UsageError(f"oracle has {beta_star.size} entries, design has {data.p} columns")
    oracle = OracleModel(beta_star, args.sigma)
    C, Jt = gram(data), fusion_Jtilde(data.p)
    sel = check_selection_conditions(args.lam, args.mu, oracle, C, Jt)
    try:
        iv = gamma_interval_all(oracle, C, Jt)
        gamma = {"lo": iv.lo, "hi": iv.hi, "empty": iv.empty}
    except SmoothLassoError as exc:
        gamma = {"error": type(exc).__name__, "message": str(exc)}
    L1, L2 = fusion_constants(beta_star)
    s = len(oracle.support)
    reports = check_assumptions(data, oracle, args.mu, lam=args.lam)
    doc = {
        "selection": sel.to_json(),
        "gamma_interval": gamma,
        "assumptions": [r.to_json() for r in reports],
        "risk_bounds": si_bounds(data.n, data.p, max(s, 1), args.sigma, args.kappa1,
                                 args.kappa2, L1).to_json() if math.isfinite(L1) else None,
        "supnorm_bounds": supnorm_bounds(data.n, data.p, args.sigma, args.kappa1, args.kappa3,
                                         L1, L2, args.alpha).to_json()
        if math.isfinite(L1) and math.isfinite(L2) else None,
    }
    json.dump(doc, out, indent=2)
    out.write("\n")


def _cmd_simulate(args, out):
    scenarios = []
    for item in args.scenario:
        for s in item.split(","):
            s = s.strip().lower()
            if s not in ("a", "b", "c", "d"):
                raise UsageError(f"unknown scenario {s!r}; choose from a, b, c, d")
            if s not in scenarios:
                scenarios.append(s)
    try:
        methods = tuple(Method(m.strip()) for m in args.methods.split(",") if m.strip())
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out_dir = args.out or default_out_dir()
    summary = run_benchmark(scenarios, methods, R=args.reps, mu_grid=args.mu_grid,
                            master_seed=args.seed, jobs=args.jobs)
    for path in write_summary(summary, out_dir, figures=args.figures):
        out.write(f"{path}\n")


_COMMANDS = {"fit": _cmd_fit, "path": _cmd_path, "select": _cmd_select, "check": _cmd_check,
             "simulate": _cmd_simulate}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SmoothLassoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
