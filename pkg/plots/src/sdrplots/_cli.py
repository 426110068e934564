"""Shared flag handling for the one-figure-per-script entry points."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec


def run_script(kind: str, plot_fn, default_group: str, argv=None) -> int:
    parser = argparse.ArgumentParser(description=f"Render a {kind} figure.")
    parser.add_argument("--input", required=True, help="source CSV or JSON")
    parser.add_argument("--out", required=True, help="image output path")
    parser.add_argument("--group-by", default=default_group,
                        help="grouping column (CSV inputs)")
    parser.add_argument("--format", choices=["png", "svg"], default="png")
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    spec = FigureSpec(input=args.input, out=args.out, kind=kind,
                      group_by=args.group_by, format=args.format, title=args.title)
    try:
        plot_fn(spec)
    except (OSError, ValueError, KeyError) as err:
        print(f"{parser.prog}: error: {err}", file=sys.stderr)
        return 1
    print(args.out)
    return 0
