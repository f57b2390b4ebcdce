"""Benchmark command line.

Subcommands::

    convergence   L^2 / H^1 interpolation errors and dyadic orders
    census        signature counts over all quadrature points

Exit codes: 0 success, 1 numerical-domain error, 2 bad arguments.
"""

import argparse
import sys

from .bench import (GridSpec, SCHEMES, convergence_study, render_census_csv,
                    render_convergence_csv, report_to_json, run_signature_census)
from .errors import SymSpaceError
from .metrics import get_metric

__all__ = ["main", "build_parser"]


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("grid sizes / degrees must be positive")
    return values


def build_parser():
    parser = argparse.ArgumentParser(
        prog="symspace-bench",
        description="Structure-preserving metric interpolation benchmarks "
                    "on the slice {t0} x [2,3]^3.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_quad):
        p.add_argument("--metric", choices=("schwarzschild", "sin2"),
                       default="schwarzschild")
        p.add_argument("--radius", type=float, default=1.0,
                       help="Schwarzschild radius (default 1.0)")
        p.add_argument("--scheme", choices=SCHEMES, default="symspace")
        p.add_argument("--quad", type=int, default=default_quad,
                       help=f"Gauss points per axis (default {default_quad})")
        p.add_argument("--out", default=None,
                       help="output path (.csv or .json); default CSV to stdout")
        p.add_argument("--tol", type=float, default=1e-12,
                       help="Karcher residual tolerance")
        p.add_argument("--max-iter", type=int, default=100,
                       help="Karcher iteration cap")

    conv = sub.add_parser("convergence", help="refinement study")
    conv.add_argument("--n", type=_int_list, default=[2, 4, 8, 16],
                      help="comma-separated grid sizes (default 2,4,8,16)")
    conv.add_argument("--degree", type=_int_list, default=[1, 2],
                      help="comma-separated polynomial degrees (default 1,2)")
    common(conv, default_quad=4)

    cens = sub.add_parser("census", help="signature census")
    cens.add_argument("--n", type=_int_list, default=[2],
                      help="grid size (default 2); first value is used")
    cens.add_argument("--degree", type=_int_list, default=[1],
                      help="polynomial degree (default 1); first value is used")
    common(cens, default_quad=2)
    return parser


def _emit(args, csv_text, json_text):
    if args.out is None:
        sys.stdout.write(csv_text)
        return
    text = json_text if args.out.endswith(".json") else csv_text
    with open(args.out, "w") as fh:
        fh.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        metric = get_metric(args.metric, args.radius)
        if args.command == "convergence":
            report = convergence_study(
                metric, args.n, args.degree, scheme=args.scheme, quad=args.quad,
                karcher_tol=args.tol, karcher_max_iter=args.max_iter,
            )
            _emit(args, render_convergence_csv(report), report_to_json(report))
        else:
            spec = GridSpec(
                n_cells=args.n[0], degree=args.degree[0], scheme=args.scheme,
                quad=args.quad, karcher_tol=args.tol,
                karcher_max_iter=args.max_iter,
            )
            report = run_signature_census(spec, metric)
            _emit(args, render_census_csv(report), report_to_json(report))
    except SymSpaceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
