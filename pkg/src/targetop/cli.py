"""Command-line interface.

    targetop analyze EVENTS --manifest M [--gridded [--dt X]] [--out REPORT]
    targetop plot EVENTS --manifest M --out SERIES [--sample-dt X]
    targetop check EVENTS --manifest M

Exit status: 0 on success, 1 on an analysis error (error name on stderr),
2 on a usage error.
"""
from __future__ import annotations

import argparse
import sys

from .checks import run_checks
from .errors import TargetOpError
from .indicators import assemble_report
from .io import load_events, load_gridded, load_manifest, plot_series, report_json, write_plot, write_report


def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="targetop", description="Identify target operations from registration logs."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inputs(p):
        p.add_argument("events", help="event log CSV (or gridded CSV with --gridded)")
        p.add_argument("--manifest", required=True, help="channel manifest JSON")
        p.add_argument("--gridded", action="store_true", help="read EVENTS as a gridded log")
        p.add_argument("--dt", type=_positive, help="grid step for --gridded (inferred if omitted)")

    p = sub.add_parser("analyze", help="compute indicators and completion times")
    add_inputs(p)
    p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("plot", help="write plot-ready thread series as CSV")
    add_inputs(p)
    p.add_argument("--out", required=True, help="output CSV")
    p.add_argument("--sample-dt", type=_positive, help="add a uniform sampling grid")

    p = sub.add_parser("check", help="run the invariant suite on one operation")
    add_inputs(p)
    return parser


def _load(args):
    manifest = load_manifest(args.manifest)
    if args.gridded:
        return load_gridded(args.events, manifest, args.dt)
    return load_events(args.events, manifest)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.dt is not None and not args.gridded:
        parser.error("--dt requires --gridded")
    try:
        record = _load(args)
        if args.command == "analyze":
            report = assemble_report(record)
            if args.out:
                write_report(report, args.out)
            else:
                sys.stdout.write(report_json(report))
        elif args.command == "plot":
            write_plot(plot_series(record, args.sample_dt), args.out)
        else:
            results = run_checks(record)
            for r in results:
                print(r.line())
            if not all(r.passed for r in results):
                print("InvariantViolation: at least one check failed", file=sys.stderr)
                return 1
    except TargetOpError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
