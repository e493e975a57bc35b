"""Command-line front end: `render --panel <kind> --in <csv> --out <png>`."""

from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .panels import PANEL_KINDS, build_panel, save_panel

__all__ = ["main"]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="chaincavity-plots",
        description="Render figure-style panels from chaincavity CSV artifacts.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one panel to a PNG")
    p.add_argument("--panel", required=True, choices=PANEL_KINDS,
                   help="panel kind")
    p.add_argument("--in", dest="inputs", action="append", required=True,
                   metavar="CSV", help="input CSV (repeatable for overlays)")
    p.add_argument("--events", default=None, metavar="CSV",
                   help="events CSV for spectrum_map markers")
    p.add_argument("--out", required=True, metavar="PNG",
                   help="output image path")
    args = parser.parse_args(argv)

    try:
        fig = build_panel(args.panel, args.inputs, args.events)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"plots error: {exc}", file=sys.stderr)
        return 2
    save_panel(fig, args.out)
    print(f"{args.panel} -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
