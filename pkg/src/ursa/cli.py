"""Command-line entry point: ``ursa [-l<n>] [-q] [-o out.cnf] [file]``."""

from __future__ import annotations

import argparse
import logging
import sys

from .driver import SessionConfig, run_session


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ursa",
        description="Solve URSA constraint specifications with a built-in SAT solver.")
    p.add_argument("-l", dest="width", type=int, default=8, metavar="N",
                   help="bit width of numeric values, 1..64 (default 8)")
    p.add_argument("-q", dest="quiet", action="store_true",
                   help="do not list individual solutions")
    p.add_argument("-o", dest="output", metavar="PATH",
                   help="write the CNF of each assert to PATH in DIMACS format instead of solving")
    p.add_argument("--prefer-independents", action="store_true",
                   help="let the solver branch on independent variables first")
    p.add_argument("file", nargs="?", help="specification file (interactive if omitted)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(format="ursa: %(levelname)s: %(message)s", level=logging.WARNING)
    try:
        config = SessionConfig(bit_width=args.width, mode="export" if args.output else "solve",
                               quiet=args.quiet, input=args.file, dimacs_out=args.output,
                               prefer_independents=args.prefer_independents)
    except ValueError as exc:
        print(f"ursa: {exc}", file=sys.stderr)
        return 2
    return run_session(config)


if __name__ == "__main__":
    sys.exit(main())
