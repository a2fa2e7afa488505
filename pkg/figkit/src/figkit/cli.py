"""figkit <figure-id> --in <csv...> --out <png/svg>"""

import argparse
import sys

from .figures import FIGURE_IDS, FigureRecipe, render
from .schema import SchemaError


def build_parser():
    ap = argparse.ArgumentParser(
        prog="figkit",
        description="render figures from co-orbital pipeline CSV outputs",
    )
    ap.add_argument("figure_id", choices=FIGURE_IDS)
    ap.add_argument("--in", dest="inputs", nargs="+", required=True,
                    help="input CSV paths (order matters for overlays)")
    ap.add_argument("--out", required=True, help="output image (png or svg)")
    ap.add_argument("--dpi", type=int, default=150)
    ap.add_argument("--title", default="")
    ap.add_argument("--labels", nargs="*", default=None,
                    help="per-input labels (slab3d layer values, unequal legend)")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    recipe = FigureRecipe(
        figure_id=args.figure_id,
        inputs=args.inputs,
        output=args.out,
        dpi=args.dpi,
        title=args.title,
        options={"labels": args.labels} if args.labels else {},
    )
    try:
        path = render(recipe)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
