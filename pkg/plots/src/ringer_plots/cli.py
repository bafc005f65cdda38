"""Command-line entry points for the two figure styles."""

import argparse
import sys

from .figures import plot_adoption, plot_experience
from .io import InputError, read_metrics, read_norms


def _parser(prog, csv_name, description):
    parser = argparse.ArgumentParser(prog=prog, description=description)
    parser.add_argument("input", help=f"path to {csv_name}")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    return parser


def experience_main(argv=None):
    args = _parser("plot-experience", "metrics.csv",
                   "Plot social experience over time per agent kind."
                   ).parse_args(argv)
    try:
        rows = read_metrics(args.input)
        plot_experience(rows, args.out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def adoption_main(argv=None):
    args = _parser("plot-adoption", "norms.csv",
                   "Plot per-norm adoption as a jittered strip plot."
                   ).parse_args(argv)
    try:
        rows = read_norms(args.input)
        plot_adoption(rows, args.out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(experience_main())
