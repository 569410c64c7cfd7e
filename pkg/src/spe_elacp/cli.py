"""Command-line front end.

Subcommands::

    run       one parameter point, simulated and closed-form side by side
    curve     sweep t1 along the concentration curve, CSV or JSON rows
    boundary  g = 1 crossing and the small-t gain limit
    verify    the self-check suite

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .protocol import (
    ProtocolParams,
    amplification_boundary,
    analytic_eta_prime,
    analytic_g,
    analytic_success_probability,
    concentration_t2,
    g_limit,
    run_protocol,
)
from .verify import ETAS, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
RUN_TOL = 1e-10
CSV_COLUMNS = ("t1", "t2", "P", "eta_prime", "g", "fidelity")
QUANTITIES = ("t2-vs-t1", "g-vs-t1", "P-vs-t1")


class UsageError(ValueError):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".10g")


def rounded(x):
    return None if x is None else float(fmt(x))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def run_report(eta: float, alpha2: float, t1: float, t2) -> dict:
    if t2 == "auto":
        t2 = concentration_t2(alpha2, t1)
    p = ProtocolParams(eta, alpha2, t1, float(t2))
    out = run_protocol(p)
    report = {
        "eta": eta,
        "alpha2": alpha2,
        "t1": t1,
        "t2": p.t2,
        "P": out.success_probability,
        "eta_prime": out.eta_prime,
        "g": out.gain if eta > 0 else None,
        "fidelity": out.fidelity,
    }
    for pattern, prob in out.per_pattern.items():
        report[f"per_pattern_{pattern}"] = prob
    report["analytic_P"] = analytic_success_probability(p)
    report["analytic_eta_prime"] = analytic_eta_prime(p)
    report["analytic_g"] = analytic_g(p) if eta > 0 else None
    devs = [
        abs(report["P"] - report["analytic_P"]),
        abs(report["eta_prime"] - report["analytic_eta_prime"]),
    ]
    if eta > 0:
        devs.append(abs(report["g"] - report["analytic_g"]))
    report["max_abs_deviation"] = max(devs)
    return report


def curve_rows(alpha2: float, eta, lo: float, hi: float, points: int) -> list[dict]:
    """One row per t1 on ``linspace(lo, hi, points)``; t2 on the concentration curve.

    Without ``eta`` only the t1 and t2 columns are filled.
    """
    if not 0.0 < lo < hi < 1.0:
        raise UsageError(f"range must satisfy 0 < lo < hi < 1, got {lo},{hi}")
    if points < 2:
        raise UsageError(f"points must be >= 2, got {points}")
    rows = []
    for t1 in np.linspace(lo, hi, points):
        t1 = float(t1)
        t2 = concentration_t2(alpha2, t1)
        row = dict.fromkeys(CSV_COLUMNS)
        row["t1"], row["t2"] = t1, t2
        if eta is not None:
            out = run_protocol(ProtocolParams(eta, alpha2, t1, t2))
            row["P"] = out.success_probability
            row["eta_prime"] = out.eta_prime
            row["g"] = out.gain if eta > 0 else None
            row["fidelity"] = out.fidelity
        rows.append(row)
    return rows


def render_rows(rows: list[dict], fmt_name: str) -> str:
    if fmt_name == "csv":
        lines = [",".join(CSV_COLUMNS)]
        lines += [",".join(fmt(r[c]) for c in CSV_COLUMNS) for r in rows]
        return "\n".join(lines) + "\n"
    return _dump([{c: rounded(r[c]) for c in CSV_COLUMNS} for r in rows])


def boundary_report(alpha2: float) -> dict:
    t1, t2 = amplification_boundary(alpha2)
    report = {"alpha2": alpha2, "t1_star": t1, "t2_star": t2}
    for eta in ETAS:
        report[f"g_limit_eta_{eta:g}"] = g_limit(eta)
    return report


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from None
    return lo, hi


def _parse_t2(text: str):
    return text if text == "auto" else float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spe-elacp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one parameter point")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--alpha2", type=float, required=True)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--t2", type=_parse_t2, default="auto", help="number or 'auto'")
    p.add_argument("--output", default="-")

    p = sub.add_parser("curve", help="sweep t1 along the concentration curve")
    p.add_argument("--quantity", choices=QUANTITIES, required=True)
    p.add_argument("--alpha2", type=float, required=True)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--range", type=_parse_range, default=(0.005, 0.995), metavar="LO,HI")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--output", default="-")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("boundary", help="amplification region and gain limit")
    p.add_argument("--alpha2", type=float, required=True)
    p.add_argument("--output", default="-")

    p = sub.add_parser("verify", help="run the self-check suite")
    p.add_argument("--grid", type=int, default=5)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--seed", type=int, default=42)
    return parser


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            report = run_report(args.eta, args.alpha2, args.t1, args.t2)
            _write(_dump({k: rounded(v) for k, v in report.items()}), args.output)
            return EXIT_OK if report["max_abs_deviation"] < RUN_TOL else EXIT_FAIL

        if args.command == "curve":
            if args.quantity != "t2-vs-t1" and args.eta is None:
                raise UsageError(f"--eta is required for --quantity {args.quantity}")
            rows = curve_rows(args.alpha2, args.eta, *args.range, args.points)
            _write(render_rows(rows, args.format), args.output)
            return EXIT_OK

        if args.command == "boundary":
            report = boundary_report(args.alpha2)
            _write(_dump({k: rounded(v) for k, v in report.items()}), args.output)
            return EXIT_OK

        results = run_checks(args.grid, args.tol, args.shots, args.seed)
        for r in results:
            print(r.line())
        ok = all(r.passed for r in results)
        print("all checks passed" if ok else "verification FAILED")
        return EXIT_OK if ok else EXIT_FAIL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
