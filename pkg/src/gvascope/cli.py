"""Command-line entry point: ``gvascope {ingest,analyze,export}``.

Exit codes: 0 success, 1 operational failure (I/O, parse, bad arguments,
analysis errors), 2 panel validation failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from . import __version__
from .accounts import BUILTIN_TABLE1, DECIMAL_POLICIES, load_panel, panel_to_csv, reference_table1, validate_panel
from .exceptions import GvascopeError
from .irregularity import DetectionConfig
from .report import analyze_panel, emit_report, render_irregularity_svg, render_scree_svg, render_share_svg

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

OUT_ENV = "GVASCOPE_OUT"
DEFAULT_OUT = "gvascope-out"
FORMATS = ("json", "md", "svg")


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are operational failures; exit 2 is reserved for invalid data
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAILURE, f"{self.prog}: error: {message}\n")


def _log_base(text: str) -> float:
    if text.strip().lower() == "e":
        return math.e
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'e' or a number > 1, got {text!r}") from None
    if not (math.isfinite(value) and value > 1):
        raise argparse.ArgumentTypeError(f"log base must be > 1, got {text!r}")
    return value


def _formats(text: str) -> tuple:
    items = tuple(dict.fromkeys(p.strip().lower() for p in text.split(",") if p.strip()))
    bad = [p for p in items if p not in FORMATS]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"formats must be a comma list of {','.join(FORMATS)}, got {text!r}")
    return items


def _add_input_options(p):
    p.add_argument("source", help=f"CSV path or {BUILTIN_TABLE1}")
    p.add_argument("--delimiter", default=None, help="field delimiter (default: sniffed from the header)")
    p.add_argument("--decimal", choices=DECIMAL_POLICIES, default="auto", help="decimal mark policy")
    p.add_argument("--default-year", type=int, default=None, help="year for rows without one")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gvascope", description="Gross-value-added spectrum analytics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse and validate a production-account panel")
    _add_input_options(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="run the full analysis and write report files")
    _add_input_options(p)
    defaults = DetectionConfig()
    p.add_argument("--year", type=int, default=None, help="year to analyze (default: latest)")
    p.add_argument("--tau", type=float, default=defaults.tau, help="flag threshold on k_irr")
    p.add_argument("--log-base", type=_log_base, default=defaults.log_base, help="'10', 'e' or any number > 1")
    p.add_argument("--baseline-space", choices=("raw", "log"), default=defaults.baseline_space)
    p.add_argument("--symmetric-flags", action="store_true", help="flag |k_irr| > tau instead of k_irr > tau")
    p.add_argument("--out", default=None, help=f"output directory (default: ${OUT_ENV} or ./{DEFAULT_OUT})")
    p.add_argument("--format", type=_formats, default=FORMATS, help="comma list of json,md,svg")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("export", help="write the builtin Table 1 dataset as CSV")
    p.add_argument("-o", "--output", default="-", help="output path ('-' for stdout)")
    p.add_argument("--delimiter", default=",")
    p.set_defaults(func=cmd_export)
    return parser


def _load(args):
    try:
        return load_panel(args.source, delimiter=args.delimiter, decimal=args.decimal, default_year=args.default_year, strict=False)
    except OSError as exc:
        raise _CliError(f"cannot read {args.source}: {exc.strerror or exc}") from None


def _plural(n: int, word: str, plural: str = "") -> str:
    return f"{n} {word if n == 1 else plural or word + 's'}"


def _report_violations(violations) -> int:
    print(f"{_plural(len(violations), 'violation')}:")
    for v in violations:
        print(f"  {v}")
    return EXIT_INVALID


def cmd_ingest(args) -> int:
    panel = _load(args)
    print(f"{_plural(len(panel.industries), 'industry', 'industries')}, {_plural(len(panel.years), 'year')}")
    violations = validate_panel(panel)
    if violations:
        return _report_violations(violations)
    print("valid")
    return EXIT_OK


def cmd_analyze(args) -> int:
    panel = _load(args)
    violations = validate_panel(panel)
    if violations:
        return _report_violations(violations)
    try:
        config = DetectionConfig(args.log_base, args.tau, args.baseline_space, args.symmetric_flags)
    except ValueError as exc:
        raise _CliError(str(exc)) from None
    report = analyze_panel(panel, args.year, config, dataset=args.source)

    outputs = {}
    if "json" in args.format:
        outputs["report.json"] = emit_report(report, "json")
    if "md" in args.format:
        outputs["report.md"] = emit_report(report, "markdown")
    if "svg" in args.format:
        outputs["scree.svg"] = render_scree_svg(report.scree, report.scree_model, log_scale=config.baseline_space == "log")
        outputs["kgva.svg"] = render_share_svg(report.share_spectrum, report.share_model)
        year_entries = [e for e in report.irregularities if e.year == report.year]
        outputs["kirr.svg"] = render_irregularity_svg(year_entries, config.tau, config.symmetric)

    out_dir = Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in outputs.items():
            (out_dir / name).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise _CliError(f"cannot write to {out_dir}: {exc.strerror or exc}") from None

    flagged = report.flagged()
    print(f"Flagged industries ({report.year}):")
    if not flagged:
        print("  none flagged")
    for e in flagged:
        print(f"  {e.id.ordinal:>3}  {report.name(e.id)}  k_irr={e.k_irr:.4f}")
    return EXIT_OK


def cmd_export(args) -> int:
    text = panel_to_csv(reference_table1(), delimiter=args.delimiter)
    if args.output == "-":
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise _CliError(f"cannot write {args.output}: {exc.strerror or exc}") from None
    print(f"wrote {args.output}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_CliError, GvascopeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
