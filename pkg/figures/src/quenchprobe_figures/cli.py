"""quenchprobe-figures command line: render figure specs to PNG + SVG."""

from __future__ import annotations

import argparse
import sys

from .render import render
from .spec import FigureSpecError, load_figure_spec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="quenchprobe-figures",
        description="Render quenchprobe CSV outputs to figure panels",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one or more figure-spec files")
    p.add_argument("specs", nargs="+", help="figure-spec files")
    args = parser.parse_args(argv)
    try:
        for path in args.specs:
            for written in render(load_figure_spec(path)):
                print(f"wrote {written}")
    except FigureSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
