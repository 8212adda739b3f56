"""Command-line entry point.

Exit codes: 0 success, 1 a case study missed one of its expectations,
2 usage or data error.
"""

from __future__ import annotations

import argparse
import sys

from . import report
from .diverge import DivergenceParams, detect_divergence
from .errors import RecipGrowthError
from .fit import FitOptions, Weighting, fit_first_order
from .modelzoo import classify
from .plot import emit_svg, plot_data
from .segment import fit_segmented
from .series import BUNDLED, exclude, load_bundled, read_csv, slice as slice_series


def _years(text: str) -> list[float]:
    try:
        return [float(y) for y in text.split(",") if y.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated years, got {text!r}")


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", nargs="?", help="CSV file with year,value rows")
    p.add_argument("--bundled", metavar="NAME", choices=BUNDLED, help="bundled dataset")
    p.add_argument("--window", nargs=2, type=float, metavar=("A", "B"))
    p.add_argument("--exclude", type=_years, default=[], metavar="Y,...")
    p.add_argument("--weighting", choices=[w.value for w in Weighting],
                   default=Weighting.UNIFORM.value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recipgrowth", description="Reciprocal-value analysis of hyperbolic growth.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="first-order hyperbolic fit")
    _add_input(p)

    p = sub.add_parser("segment", help="piecewise hyperbolic fit")
    _add_input(p)
    p.add_argument("--max-segments", type=int, default=2)
    p.add_argument("--min-pts", type=int, default=4)

    p = sub.add_parser("diverge", help="departure from a baseline hyperbola")
    _add_input(p)
    p.add_argument("--baseline", nargs=2, type=float, metavar=("A", "B"), required=True)
    p.add_argument("--z", type=float, default=2.0, help="z threshold (default 2.0)")
    p.add_argument("--min-run", type=int, default=3)

    p = sub.add_parser("classify", help="rank trajectory families by BIC")
    _add_input(p)
    p.add_argument("--max-degree", type=int, default=3)

    p = sub.add_parser("case", help="run a bundled case study")
    p.add_argument("name", choices=sorted(report.case_studies()))

    p = sub.add_parser("plot", help="plot data as CSV on stdout, optionally an SVG file")
    _add_input(p)
    p.add_argument("--space", choices=["direct", "reciprocal"], default="reciprocal")
    p.add_argument("--max-segments", type=int, default=1)
    p.add_argument("--min-pts", type=int, default=4)
    p.add_argument("--points", type=int, default=200, help="dense grid size")
    p.add_argument("--svg", metavar="PATH")
    return parser


def _load(args, parser):
    if (args.file is None) == (args.bundled is None):
        parser.error("give exactly one of FILE or --bundled NAME")
    series = load_bundled(args.bundled) if args.bundled else read_csv(args.file)
    full = series
    if args.window:
        series = slice_series(series, *args.window)
    series = exclude(series, args.exclude)
    return full, series


def _inputs(args) -> dict:
    return {"file": args.file, "dataset": args.bundled,
            "window": [report.q(w, "year") for w in args.window] if args.window else None,
            "exclude": [report.q(y, "year") for y in args.exclude],
            "options": {"weighting": args.weighting}}


def run(args, parser) -> int:
    if args.command == "case":
        doc = report.run_case_study(args.name)
        print(report.dumps(doc))
        return 0 if doc["pass"] else 1

    full, series = _load(args, parser)
    options = FitOptions(args.weighting)
    inputs = _inputs(args)

    if args.command == "fit":
        doc = report.envelope("fit", inputs, {"fit": report.fit_to_dict(
            fit_first_order(series, options))})
    elif args.command == "segment":
        seg = fit_segmented(series, args.max_segments, args.min_pts, options)
        inputs.update(max_segments=args.max_segments, min_pts=args.min_pts)
        doc = report.envelope("segment", inputs, {"segmented": report.segmented_to_dict(seg)})
    elif args.command == "diverge":
        # the baseline window cuts the series itself; --window only bounds it
        rep = detect_divergence(series, tuple(args.baseline),
                                DivergenceParams(args.z, args.min_run), options)
        inputs.update(baseline=[report.q(b, "year") for b in args.baseline],
                      z_threshold=args.z, min_run=args.min_run)
        doc = report.envelope("diverge", inputs, {"divergence": report.divergence_to_dict(rep)})
    elif args.command == "classify":
        res = classify(series, args.max_degree)
        inputs.update(max_degree=args.max_degree)
        doc = report.envelope("classify", inputs,
                              {"classification": report.classification_to_dict(res)})
    elif args.command == "plot":
        if args.max_segments > 1:
            model = fit_segmented(series, args.max_segments, args.min_pts, options)
        else:
            model = fit_first_order(series, options)
        pdata = plot_data(full if args.window else series, model, args.space, args.points)
        sys.stdout.write(pdata.to_csv())
        if args.svg:
            unit = full.unit or "value"
            ylabel = unit if args.space == "direct" else f"1/({unit})"
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(emit_svg(pdata, "year", ylabel, full.label))
        return 0
    else:  # pragma: no cover - argparse enforces the choices
        parser.error(f"unknown command {args.command}")
    print(report.dumps(doc))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (RecipGrowthError, OSError, ValueError) as exc:
        print(f"recipgrowth: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
