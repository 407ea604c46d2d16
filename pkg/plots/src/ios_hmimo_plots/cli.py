"""Command-line entry point: plot <figure> --in <csv> --out <png/svg>."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_RATE_VS_N, FIGURE_RGM_VS_POWER, FigureSpec, PlotError, render

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ios-hmimo-plot",
        description="Render reproduction figures from experiment-runner CSV output.",
    )
    parser.add_argument("figure", choices=[FIGURE_RATE_VS_N, FIGURE_RGM_VS_POWER])
    parser.add_argument("--in", dest="input_csv", required=True, help="input CSV path")
    parser.add_argument("--out", dest="output", required=True, help="output image path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        render(FigureSpec(input_csv=args.input_csv, figure=args.figure, output=args.output))
    except PlotError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
