"""Command-line interface: ``treegibbs {classify,sweep,verify,thresholds}``.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .diagnostics import formula_report
from .io import fmt, params_dict, thresholds_dict, write_regions_csv, write_sweep
from .model import ModelParams, NumericsConfig
from .phase import classify, phase_regions, sweep
from .quadrature import build_rule, fixed_point_grid, residual_norm
from .verify import BRANCH_TOL, SUITES, VerifyGrid, run_suites

EXIT_OK, EXIT_VERIFY, EXIT_ARGS, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _config(args) -> NumericsConfig:
    kw = {}
    if getattr(args, "quad_order", None) is not None:
        kw["quad_order"] = args.quad_order
    if getattr(args, "residual_tol", None) is not None:
        kw["residual_tol"] = args.residual_tol
    try:
        return NumericsConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _params(args, theta: float = 0.0) -> ModelParams:
    try:
        return ModelParams(args.k, args.n, theta, literal_kernel=args.literal_kernel)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_classify(args) -> int:
    config = _config(args)
    params = _params(args, args.theta)
    res = classify(params)
    print(f"classification: {res.classification}")
    print(f"stated classification: {res.stated_classification}")
    print(f"theta_1: {fmt(res.theta1)}")
    print("theta sequence: " + ", ".join(fmt(t) for t in res.thresholds))
    print(f"ratio threshold: {fmt(res.theta_ratio)}")
    if res.theta_top is not None:
        print(f"theta_{2 * params.s + 1}: {fmt(res.theta_top)}")
    print(f"domain: |theta| < {fmt(res.domain_bound)}")
    print(f"lambda_star: {fmt(res.lambda_star) or '-'}")
    status = EXIT_OK
    rule = build_rule(params.n, config.quad_order) if args.verify else None
    for i, fp in enumerate(res.fixed_points, 1):
        line = f"fixed point {i}: c={fmt(fp.c)} lambda={fmt(fp.lam)}"
        if rule is not None:
            r = residual_norm(params, rule, fixed_point_grid(rule, fp.c, fp.lam))
            line += f" residual={r:.3e}"
            if not r < BRANCH_TOL:
                status = EXIT_VERIFY
        print(line)
    for w in res.warnings:
        _warn(w)
    return status


def _theta_range(args) -> np.ndarray:
    if args.steps < 2:
        raise UsageError(f"--steps must be >= 2, got {args.steps}")
    if not args.theta_min < args.theta_max:
        raise UsageError(f"--theta-min ({args.theta_min}) must be below --theta-max ({args.theta_max})")
    return np.linspace(args.theta_min, args.theta_max, args.steps)


def cmd_sweep(args) -> int:
    config = _config(args)
    params = _params(args)
    grid = _theta_range(args)
    try:
        rows = sweep(params, grid, config, verify=args.verify, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    warnings = sorted({w for row in rows for w in row.warnings})
    try:
        if args.output in (None, "-"):
            write_sweep(sys.stdout, params, rows, args.format)
        else:
            out = Path(args.output)
            with out.open("w", newline="") as fh:
                write_sweep(fh, params, rows, args.format)
            if args.format == "csv":
                with out.with_suffix(".regions.csv").open("w", newline="") as fh:
                    write_regions_csv(fh, phase_regions(params))
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    for w in warnings:
        _warn(w)
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _config(args)
    ks = tuple(args.k) if args.k else VerifyGrid.ks
    ns = tuple(args.n) if args.n else VerifyGrid.ns
    for k in ks:
        if k < 2:
            raise UsageError(f"tree order k must be >= 2, got {k}")
    for n in ns:
        if n < 1:
            raise UsageError(f"exponent parameter n must be >= 1, got {n}")
    only = [s for item in (args.only or []) for s in item.split(",") if s]
    unknown = [s for s in only if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    grid = VerifyGrid(ks, ns, config, args.literal_kernel)
    results = run_suites(grid, only or None)
    for r in results:
        print(r.line())

    print("closed-form diagnostics (printed vs derived):")
    for k, n in grid.pairs():
        checks = formula_report(ModelParams(k, n, 0.5, literal_kernel=args.literal_kernel))
        mismatched = [c.name for c in checks if not c.matches]
        print(f"  k={k} n={n}: {len(checks) - len(mismatched)}/{len(checks)} match"
              + (f"; mismatched: {'; '.join(mismatched)}" if mismatched else ""))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_thresholds(args) -> int:
    params = _params(args)
    doc = {
        "params": params_dict(params),
        "thresholds": thresholds_dict(params),
        "regions": [r.as_dict() for r in phase_regions(params)],
        "stated_regions": [r.as_dict() for r in phase_regions(params, stated=True)],
        "formulas": [c.as_dict() for c in formula_report(params.with_theta(0.5))],
    }
    if args.format == "json":
        json.dump(doc, sys.stdout, indent=2)
        print()
        return EXIT_OK
    t = doc["thresholds"]
    print(f"k={params.k} n={params.n} domain |theta| < {fmt(t['domain_bound'])}")
    for i, th in enumerate(t["theta_sequence"]):
        print(f"  theta_{2 * i + 1} = {fmt(th)}")
    print(f"  ratio threshold = {fmt(t['theta_ratio'])}")
    print("regions:")
    for r in doc["regions"]:
        lo = "[" if r["lo_closed"] else "("
        hi = "]" if r["hi_closed"] else ")"
        print(f"  {lo}{fmt(r['lo'])}, {fmt(r['hi'])}{hi}: {r['classification']}")
    print("printed formulas:")
    for c in doc["formulas"]:
        print(f"  {'ok ' if c['matches'] else 'BAD'} {c['name']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treegibbs",
        description="Translation-invariant Gibbs measures of a [0,1]-spin model on a Cayley tree.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def model_flags(p, multiple=False):
        if multiple:
            p.add_argument("--k", type=int, action="append", help="tree order (repeatable)")
            p.add_argument("--n", type=int, action="append", help="exponent parameter (repeatable)")
        else:
            p.add_argument("--k", type=int, required=True, help="tree order, k >= 2")
            p.add_argument("--n", type=int, required=True, help="exponent parameter, n >= 1")
        p.add_argument("--literal-kernel", action="store_true",
                       help="use K = 1 + theta*root(4(t-1/2)(u-1/2)) instead of 1 + theta*phi(t)*phi(u)")

    def numeric_flags(p):
        p.add_argument("--quad-order", type=int, help="Gauss-Legendre points per half-interval")
        p.add_argument("--residual-tol", type=float, help="fixed-point residual tolerance")

    p = sub.add_parser("classify", help="classify one parameter point")
    model_flags(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--verify", action="store_true", help="check each fixed point on the quadrature grid")
    numeric_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="classify a theta range and write CSV or JSON")
    model_flags(p)
    p.add_argument("--theta-min", type=float, required=True)
    p.add_argument("--theta-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--verify", action="store_true", help="record the worst oracle residual per row")
    p.add_argument("--workers", type=int, default=None, help="threads for row evaluation")
    numeric_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the verification suites")
    model_flags(p, multiple=True)
    p.add_argument("--only", action="append", help=f"suite name(s): {', '.join(SUITES)}")
    numeric_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("thresholds", help="print thresholds, phase regions and formula checks")
    model_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_thresholds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
