"""Render one experiment CSV to an image: bar, line family, or heatmap grid."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import KINDS, FigureSpec, render
from .schema import SchemaError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="corrvote-render",
        description="Render a corrvote result CSV as a chart.",
    )
    parser.add_argument("csv", help="result CSV (experiments schema)")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--out", default=None, help="image path (default: <csv>.png)")
    parser.add_argument("--title", default=None)
    parser.add_argument("--x-label", default=None)
    args = parser.parse_args(argv)

    csv_path = Path(args.csv)
    out_path = Path(args.out) if args.out else csv_path.with_suffix(".png")
    try:
        written = render(
            FigureSpec(
                csv_path=csv_path,
                kind=args.kind,
                out_path=out_path,
                title=args.title,
                x_label=args.x_label,
            )
        )
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {written}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
