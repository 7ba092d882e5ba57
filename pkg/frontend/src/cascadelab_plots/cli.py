"""Command line entry for figure regeneration."""

from __future__ import annotations

import argparse
import os
import sys

from .render import KINDS, FigureSpec, SchemaError, discover_inputs, render

OUT_NAMES = {
    "tail-flatness": "tail_flatness",
    "rayleigh": "rayleigh",
    "outside-giant": "outside_giant",
    "fpt-ratio": "fpt_ratio",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="plots", description="Regenerate figures from harness CSV outputs."
    )
    p.add_argument("--input", required=True, help="directory of harness CSVs")
    p.add_argument("--kind", required=True, choices=KINDS + ("all",))
    p.add_argument("--out", default=".", help="output directory for PNG and SVG")
    p.add_argument("--no-overlay", action="store_true", help="suppress theory curves")
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--p2", type=float, default=0.5)
    p.add_argument("--d", type=float, default=2.5)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not os.path.isdir(args.input):
        print(f"plots: input directory not found: {args.input}", file=sys.stderr)
        return 1
    os.makedirs(args.out, exist_ok=True)
    kinds = KINDS if args.kind == "all" else (args.kind,)
    params = {"theta": args.theta, "p2": args.p2, "d": args.d}
    wrote = []
    for kind in kinds:
        inputs = discover_inputs(args.input, kind)
        if not inputs:
            if args.kind == "all":
                continue
            print(f"plots: no CSVs for kind {kind} in {args.input}", file=sys.stderr)
            return 1
        spec = FigureSpec(
            inputs=inputs,
            kind=kind,
            out_path=os.path.join(args.out, OUT_NAMES[kind]),
            overlay=not args.no_overlay,
            params=params,
        )
        try:
            wrote.extend(render(spec))
        except SchemaError as exc:
            print(f"plots: {exc}", file=sys.stderr)
            return 2
    for path in wrote:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
