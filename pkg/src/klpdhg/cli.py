"""Command-line interface.

Subcommands::

    klpdhg solve --input F --alpha A --lambda L [...]
    klpdhg path  --input F --alpha A [--nlambda 100] [--lambda-min-ratio 1e-3] [...]
    klpdhg check --input F --coefficients F3 --alpha A --lambda L
    klpdhg bench --m M --n N --correlation R --seed S --solver en|l1 --alpha A --lambda L

``solve``, ``path`` and ``bench`` accept ``--step-norm spectral`` for step
sizes that cannot diverge on correlated predictors.

Exit status is 0 on success, 2 when a solve stopped at ``max_iter`` (or a
check fails its tolerance) and 1 on errors.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import logging
import sys
import time

import numpy as np
from threadpoolctl import threadpool_limits

from .core import PenaltyParams, objective
from .elastic_net import DEFAULT_MAX_ITER, DEFAULT_TOL, solve
from .exceptions import KLPDHGError
from .io import (
    load_coefficients,
    load_dataset,
    make_correlated_problem,
    sparse_pairs,
    write_csv,
    write_svmlight,
)
from .lasso import solve_l1
from .oracle import kkt_residual, lambda_max
from .path import PathConfig, solve_path

logger = logging.getLogger("klpdhg")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2


def _add_common(p, *, output=True):
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--threads", type=int, default=None,
                   help="thread count for the matrix kernels")
    p.add_argument("--step-norm", choices=("row", "spectral"), default="row",
                   help="matrix constant for the step sizes; 'spectral' cannot diverge")
    if output:
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--output-format", choices=("json", "csv"), default="json")


def _add_input(p):
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("auto", "csv", "svmlight"), default="auto")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="klpdhg",
        description="Elastic-net / lasso logistic regression by nonlinear primal-dual iterations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="fit one (alpha, lambda) pair")
    _add_input(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--trace", action="store_true", help="include the residual history")
    _add_common(p)

    p = sub.add_parser("path", help="warm-started regularization path")
    _add_input(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--nlambda", type=int, default=100)
    p.add_argument("--lambda-min-ratio", type=float, default=1e-3)
    p.add_argument("--cold", action="store_true", help="solve every grid point from zero")
    _add_common(p)

    p = sub.add_parser("check", help="optimality residuals of a coefficient file")
    _add_input(p)
    p.add_argument("--coefficients", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--kkt-tol", type=float, default=1e-6,
                   help="stationarity threshold for exit status 0")
    p.add_argument("--out", default=None)

    p = sub.add_parser("bench", help="time a solve on a synthetic correlated instance")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--correlation", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solver", choices=("en", "l1"), default="en")
    p.add_argument("--alpha", type=float, default=None)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--lambda", dest="lam", type=float)
    group.add_argument("--lambda-ratio", type=float, help="lambda as a fraction of lambda_max")
    p.add_argument("--save-data", default=None,
                   help="write the generated instance (.csv or svmlight by extension)")
    p.add_argument("--trace", action="store_true")
    _add_common(p)
    return parser


def _dump(doc, path, fmt="json", csv_rows=None):
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = json.dumps(doc, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _run_solver(data, alpha, lam, args, solver=None):
    if solver == "l1" or (solver is None and alpha == 1.0):
        return solve_l1(data, lam, tol=args.tol, max_iter=args.max_iter,
                        step_norm=args.step_norm)
    return solve(data, PenaltyParams(lam, alpha), tol=args.tol, max_iter=args.max_iter,
                 step_norm=args.step_norm)


def _solve_doc(data, alpha, lam, report, trace):
    p = PenaltyParams(lam, alpha)
    kkt = kkt_residual(data, report.theta, p, s=report.s)
    doc = {
        "command": "solve",
        "alpha": alpha,
        "lambda": lam,
        "n_samples": data.m,
        "n_features": data.n,
        "theta": sparse_pairs(report.theta),
        "objective": report.objective,
        "iterations": report.iterations,
        "final_residual": report.final_residual,
        "termination": report.termination,
        "kkt": {
            "stationarity": kkt.stationarity_residual,
            "dual_consistency": kkt.dual_consistency_residual,
        },
    }
    if trace:
        doc["residual_history"] = [float(r) for r in report.residual_history]
    return doc


def cmd_solve(args):
    data = load_dataset(args.input, args.format)
    report = _run_solver(data, args.alpha, args.lam, args)
    doc = _solve_doc(data, args.alpha, args.lam, report, args.trace)
    rows = [["index", "value"]] + doc["theta"]
    _dump(doc, args.out, args.output_format, rows)
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_path(args):
    data = load_dataset(args.input, args.format)
    cfg = PathConfig(alpha=args.alpha, n_lambda=args.nlambda,
                     lambda_min_ratio=args.lambda_min_ratio, tol=args.tol,
                     max_iter=args.max_iter, step_norm=args.step_norm)
    res = solve_path(data, cfg, warm_start=not args.cold)
    header = ["lambda", "nonzeros", "objective", "iterations", "converged"] + [
        f"theta_{j + 1}" for j in range(data.n)]
    rows = [header]
    for i, lam in enumerate(res.lambdas):
        rows.append([repr(float(lam)), int(res.nonzero_counts[i]), repr(float(res.objectives[i])),
                     int(res.iterations[i]), int(res.converged[i])]
                    + [repr(float(c)) for c in res.coefficients[i]])
    doc = {
        "command": "path",
        "alpha": args.alpha,
        "n_features": data.n,
        "partial": res.partial,
        "lambdas": res.lambdas.tolist(),
        "nonzero_counts": res.nonzero_counts.tolist(),
        "objectives": res.objectives.tolist(),
        "iterations": res.iterations.tolist(),
        "converged": res.converged.tolist(),
        "coefficients": [sparse_pairs(c) for c in res.coefficients],
    }
    _dump(doc, args.out, args.output_format, rows)
    return EXIT_NOT_CONVERGED if res.partial else EXIT_OK


def cmd_check(args):
    data = load_dataset(args.input, args.format)
    theta = load_coefficients(args.coefficients, data.n)
    p = PenaltyParams(args.lam, args.alpha)
    kkt = kkt_residual(data, theta, p)
    doc = {
        "command": "check",
        "alpha": args.alpha,
        "lambda": args.lam,
        "objective": objective(data, theta, p),
        "nonzeros": int(np.count_nonzero(theta)),
        "kkt": {
            "stationarity": kkt.stationarity_residual,
            "dual_consistency": kkt.dual_consistency_residual,
        },
        "passed": kkt.stationarity_residual <= args.kkt_tol,
    }
    _dump(doc, args.out)
    return EXIT_OK if doc["passed"] else EXIT_NOT_CONVERGED


def cmd_bench(args):
    if args.solver == "l1":
        alpha = 1.0
        if args.alpha is not None and args.alpha != 1.0:
            raise KLPDHGError("the l1 solver requires alpha = 1")
    else:
        alpha = 0.5 if args.alpha is None else args.alpha
        if alpha >= 1.0:
            raise KLPDHGError("the en solver requires alpha < 1")
    data, _ = make_correlated_problem(args.m, args.n, args.correlation, args.seed)
    if args.save_data:
        if args.save_data.endswith(".csv"):
            write_csv(data, args.save_data)
        else:
            write_svmlight(data, args.save_data)
    lmax = lambda_max(data, alpha)
    lam = args.lam if args.lam is not None else args.lambda_ratio * lmax
    t0 = time.perf_counter()
    report = _run_solver(data, alpha, lam, args, solver=args.solver)
    wall = time.perf_counter() - t0
    doc = _solve_doc(data, alpha, lam, report, args.trace)
    doc.update({
        "command": "bench",
        "solver": args.solver,
        "m": args.m,
        "n": args.n,
        "correlation": args.correlation,
        "seed": args.seed,
        "lambda_max": lmax,
        "wall_time": wall,
    })
    rows = [["solver", "m", "n", "correlation", "seed", "lambda", "iterations",
             "wall_time", "termination"],
            [args.solver, args.m, args.n, args.correlation, args.seed, repr(lam),
             report.iterations, repr(wall), report.termination]]
    _dump(doc, args.out, args.output_format, rows)
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


COMMANDS = {"solve": cmd_solve, "path": cmd_path, "check": cmd_check, "bench": cmd_bench}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    threads = getattr(args, "threads", None)
    limits = threadpool_limits(limits=threads) if threads else contextlib.nullcontext()
    try:
        with limits:
            return COMMANDS[args.command](args)
    except (KLPDHGError, OSError, ValueError, KeyError) as exc:
        print(f"klpdhg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
