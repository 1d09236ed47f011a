"""figgen command line: one figure per invocation, PNG plus SVG."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figgen",
        description="Render lexsim aggregate.csv files as publication figures.",
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--csv", required=True, help="aggregate CSV produced by lexsim")
    parser.add_argument("--out", required=True,
                        help="output base path; .png and .svg are emitted")
    parser.add_argument("--f", type=float, default=None, help="pointing probability filter")
    parser.add_argument("--algorithm", default=None, help="algorithm filter")
    parser.add_argument("--strategy", default=None, help="production strategy filter")
    parser.add_argument("--checkpoint", type=int, default=None,
                        help="checkpoint for strategy-comparison (default: last common)")
    parser.add_argument("--logx", action="store_true", help="log-scaled interaction axis")
    parser.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        kind=args.kind,
        csv=Path(args.csv),
        out=Path(args.out),
        f=args.f,
        algorithm=args.algorithm,
        strategy=args.strategy,
        checkpoint=args.checkpoint,
        logx=args.logx,
        title=args.title,
    )
    try:
        written = render(spec)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
