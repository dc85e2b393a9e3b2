"""Command-line front end.

    gausskuzmin rate --p 1 --p-max 10
    gausskuzmin iterate --p 2 --n-max 25 --out iterate.csv
    gausskuzmin montecarlo --p 1 --n 3 --x 0.25,0.5,0.75 --samples 1000000
    gausskuzmin orbit --p 2 --x 0.7 --n 10
    gausskuzmin verify

CSV output has a single header row and floats with 17 significant digits.
JSON output carries ``schema_version``.  Every command exits nonzero when one
of its checks fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import checks
from .gauss_map import orbit, phi_monte_carlo
from .hurwitz import asymptotic_residual, q_bounds, q_constant
from .kuzmin import (
    KUZMIN_POLICY,
    RESIDUAL_FLOOR,
    default_grid,
    iterate_records,
    phi_iterate,
    rate_report,
)
from .transfer import TruncationPolicy

SCHEMA_VERSION = 1


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return "" if v is None else str(v)


def _jsonable(v):
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        v = float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _emit(args, command: str, header: list[str], rows: list[list], extra: dict | None = None):
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "rows": [dict(zip(header, row)) for row in rows],
        }
        if extra:
            doc.update(extra)
        text = json.dumps(_jsonable(doc), indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
        if extra and args.format == "csv":
            side = Path(args.out).with_suffix(".rate.json")
            side.write_text(json.dumps(_jsonable({"schema_version": SCHEMA_VERSION, **extra}), indent=2) + "\n")
    else:
        sys.stdout.write(text)
        if extra and args.format == "csv":
            sys.stderr.write(json.dumps(_jsonable({"schema_version": SCHEMA_VERSION, **extra})) + "\n")


def _policy(args, default: TruncationPolicy) -> TruncationPolicy:
    return TruncationPolicy(
        k_max=args.k_max if args.k_max is not None else default.k_max,
        taylor_order=args.taylor_order if args.taylor_order is not None else default.taylor_order,
        tail_tol=args.tail_tol if args.tail_tol is not None else default.tail_tol,
    )


def _x_list(text: str | None, default: list[float]) -> list[float]:
    if text is None:
        return default
    return [float(t) for t in text.split(",") if t.strip()]


def cmd_rate(args) -> int:
    p_lo = args.p or 1
    p_hi = args.p_max or p_lo
    if p_hi < p_lo:
        raise SystemExit("--p-max must be >= --p")
    tol = args.tol if args.tol is not None else 1e-12

    def row(p):
        q = q_constant(p, tol)
        b = q_bounds(p)
        ok = b.lower < q.lo and q.hi < b.upper < 1.0
        resid = asymptotic_residual(p) if p >= 2 else None
        return [p, q.value, q.err, b.lower, b.upper, ok, resid]

    ps = range(p_lo, p_hi + 1)
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(row, ps))
    header = ["p", "q_p", "q_err", "lower", "upper", "pass", "asymptotic_residual"]
    _emit(args, "rate", header, rows)
    return 0 if all(r[5] for r in rows) else 1


def cmd_iterate(args) -> int:
    p = args.p or 1
    n_max = args.n_max if args.n_max is not None else 30
    grid = default_grid(args.grid or 33)
    policy = _policy(args, KUZMIN_POLICY)
    records = iterate_records(p, n_max, grid, policy, args.degree)
    report = rate_report(p, [r.sup_delta for r in records], RESIDUAL_FLOOR)
    labels = [_fmt(x) for x in grid]
    header = ["n", "sup_delta"] + [f"phi({x})" for x in labels] + [f"delta({x})" for x in labels]
    rows = [[r.n, r.sup_delta, *r.phi, *r.delta] for r in records]
    _emit(args, "iterate", header, rows, {"rate_report": report.to_dict()})
    return 0 if report.within_bound else 1


def cmd_montecarlo(args) -> int:
    p = args.p or 1
    n = args.n if args.n is not None else 1
    xs = _x_list(args.x, [0.25, 0.5, 0.75])
    samples = args.samples or 1_000_000
    seed = args.seed if args.seed is not None else 0
    tol = 4.0 / math.sqrt(samples)
    analytic = phi_iterate(p, n, sorted(xs)).phi
    lookup = dict(zip(sorted(xs), analytic))
    rows = []
    for x in xs:
        est = phi_monte_carlo(p, n, x, samples, seed, args.workers)
        diff = abs(est - lookup[x])
        rows.append([x, est, lookup[x], diff, tol, diff <= tol])
    _emit(args, "montecarlo", ["x", "estimate", "analytic", "|diff|", "tolerance", "pass"], rows)
    return 0 if all(r[-1] for r in rows) else 1


def cmd_orbit(args) -> int:
    p = args.p or 1
    x0 = _x_list(args.x, [math.sqrt(2.0) - 1.0])[0]
    n = args.n if args.n is not None else 20
    rec = orbit(p, x0, n)
    rows = []
    for i, pt in enumerate(rec.points):
        rows.append([i, pt, int(rec.digits[i]) if i < len(rec.digits) else None])
    _emit(args, "orbit", ["i", "point", "digit"], rows)
    return 0


def cmd_verify(args) -> int:
    options = {
        "samples": args.samples or 200_000,
        "seed": args.seed if args.seed is not None else 0,
        "workers": args.workers,
    }
    results = checks.run_checks(tol=args.tol, **options)
    rows = [[r.name, r.passed, r.detail] for r in results]
    _emit(args, "verify", ["check", "pass", "detail"], rows)
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "rate": cmd_rate,
    "iterate": cmd_iterate,
    "montecarlo": cmd_montecarlo,
    "orbit": cmd_orbit,
    "verify": cmd_verify,
}


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_positive_int)
    common.add_argument("--p-max", type=_positive_int)
    common.add_argument("--n", type=_nonneg_int)
    common.add_argument("--n-max", type=_nonneg_int)
    common.add_argument("--grid", type=_positive_int, help="number of equispaced grid points")
    common.add_argument("--x", help="comma-separated points in [0, 1]")
    common.add_argument("--samples", type=_positive_int)
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=_positive_float)
    common.add_argument("--tail-tol", type=_positive_float)
    common.add_argument("--k-max", type=_positive_int)
    common.add_argument("--taylor-order", type=int, choices=range(5))
    common.add_argument("--degree", type=_positive_int, default=64)
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--workers", type=_positive_int, default=1)

    parser = argparse.ArgumentParser(prog="gausskuzmin", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
