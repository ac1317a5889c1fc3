"""Command-line entry point: ``polscatter scan <scenario-file>``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ScenarioValidationError
from .scan import run_scan, to_csv
from .scenario import parse_scenario

EXIT_OK, EXIT_INVALID, EXIT_SOLVER = 0, 1, 2


def build_parser():
    parser = argparse.ArgumentParser(prog="polscatter",
                                     description="Forces on multilevel atoms in polarization gradients.")
    sub = parser.add_subparsers(dest="command", required=True)
    scan = sub.add_parser("scan", help="scan the force over position and velocity grids")
    scan.add_argument("scenario", type=Path, help="YAML/JSON scenario document")
    scan.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")
    scan.add_argument("--format", choices=["csv"], default="csv")
    scan.add_argument("--units", choices=["natural", "si"], default="natural",
                      help="natural: hbar = c = 1; si: inputs in SI, forces in newtons")
    scan.add_argument("--threads", type=int, default=1, help="rows evaluated in parallel")
    return parser


def cmd_scan(args):
    try:
        scenario = parse_scenario(args.scenario.read_bytes())
    except OSError as exc:
        print(f"error: cannot read {args.scenario}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ScenarioValidationError, UnicodeDecodeError) as exc:
        problems = getattr(exc, "errors", [str(exc)])
        for problem in problems:
            print(f"invalid scenario: {problem}", file=sys.stderr)
        return EXIT_INVALID
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INVALID

    rows = run_scan(scenario, units=args.units, threads=args.threads)
    text = to_csv(scenario, rows, units=args.units)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
    failed = sum(1 for row in rows if row.get("error"))
    if failed:
        print(f"{failed} of {len(rows)} rows failed; see the error column", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    return {"scan": cmd_scan}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
