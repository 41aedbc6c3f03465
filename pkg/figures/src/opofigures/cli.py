"""Batch entry point: opofar-figures <recipe> [<recipe> ...]"""
from __future__ import annotations

import argparse
import sys

from .errors import FigureError
from .recipes import load_recipe
from .render import render


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="opofar-figures",
                                 description="Render solver CSVs per recipe files")
    ap.add_argument("recipes", nargs="+", help="recipe files (key = value format)")
    args = ap.parse_args(argv)
    try:
        for path in args.recipes:
            result = render(load_recipe(path))
            for out in result.paths:
                print(f"wrote {out}")
    except FigureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
