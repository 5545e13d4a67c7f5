"""Command-line front end.

Exit codes: 0 success, 2 input or parse error, 3 semantic or validation
error, 4 output I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .core import IndicatorTrace, WindowSpec, indicator_trace
from .errors import (
    BindingError,
    ConfigError,
    InsufficientDataError,
    PanelError,
    ScheduleError,
)
from .panel import format_float, panel_to_csv, read_panel_csv
from .scenario import IntegrityError, ScenarioParseError, read_scenario
from .strategy import compare_strategies
from .synth import SynthConfig, generate_panel

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SEMANTIC = 3
EXIT_OUTPUT = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _error(message: str) -> None:
    prefix = "error:"
    if sys.stderr.isatty() and "NO_COLOR" not in os.environ:
        prefix = "\033[31merror:\033[0m"
    print(f"{prefix} {message}", file=sys.stderr)


def _write_text(path: str | Path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_OUTPUT, f"cannot write {path}: {exc}") from None


def _load_panel(path: str):
    try:
        return read_panel_csv(path)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read panel {path}: {exc}") from None
    except (PanelError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc}") from None


def trace_to_csv(trace: IndicatorTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["epoch", *trace.parameter_ids])
    for t, row in zip(trace.epochs, trace.g):
        writer.writerow([t, *map(format_float, row)])
    return buf.getvalue()


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read config {args.config}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, f"{args.config}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise CliError(EXIT_INPUT, f"{args.config}: config must be a JSON object")
    if args.seed is not None:
        data = {**data, "seed": args.seed}
    try:
        config = SynthConfig.from_dict(data)
    except ConfigError as exc:
        raise CliError(EXIT_INPUT, f"invalid config field {exc}") from None
    except TypeError as exc:
        raise CliError(EXIT_INPUT, f"invalid config: {exc}") from None
    panel = generate_panel(config)
    _write_text(args.out, panel_to_csv(panel))
    print(f"n={config.n} t_max={config.t_max} seed={config.seed}")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    panel = _load_panel(args.panel)
    try:
        spec = WindowSpec(args.k, args.mode)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    try:
        trace = indicator_trace(panel, spec, method=args.method, workers=args.workers)
    except InsufficientDataError as exc:
        raise CliError(EXIT_SEMANTIC, str(exc)) from None
    _write_text(args.out, trace_to_csv(trace))
    print(
        f"n={panel.n} t_max={panel.t_max} k={spec.k} mode={spec.mode.value} "
        f"epochs={trace.epochs[0]}..{trace.epochs[-1]}"
    )
    print(f"g_total={format_float(trace.g_total)}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    panel = _load_panel(args.panel)
    try:
        scenario = read_scenario(args.scenario)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read scenario {args.scenario}: {exc}") from None
    except ScenarioParseError as exc:
        raise CliError(EXIT_INPUT, f"{args.scenario}: {exc}") from None
    try:
        baseline, alt = scenario.resolve(panel)
        report = compare_strategies(
            panel,
            baseline,
            alt,
            scenario.schedule,
            scenario.window,
            scenario.budget,
            scenario.economic,
            method=args.method,
            workers=args.workers,
        )
    except IntegrityError as exc:
        raise CliError(
            EXIT_SEMANTIC, "referential integrity violated:\n  " + "\n  ".join(exc.dangling)
        ) from None
    except (BindingError, ScheduleError, InsufficientDataError) as exc:
        raise CliError(EXIT_SEMANTIC, str(exc)) from None
    _write_text(args.out, json.dumps(report.to_dict(), indent=2) + "\n")
    if args.plots:
        from .plots import write_plots

        try:
            write_plots(report, args.plots)
        except OSError as exc:
            raise CliError(EXIT_OUTPUT, f"cannot write plots to {args.plots}: {exc}") from None
    g1, g2 = report.g_values
    print(f"g_values={format_float(g1)},{format_float(g2)}")
    print(f"delta_g={format_float(report.delta_g)}")
    print(f"blocked_cells={report.blocked_cells}")
    return EXIT_OK


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="integral-indicators",
        description="Sliding-window correlation indicators and sanction scenario comparison.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic panel CSV")
    gen.add_argument("--config", required=True, help="generator config (JSON)")
    gen.add_argument("--out", required=True, help="output panel CSV")
    gen.add_argument("--seed", type=_u64, help="override the config seed")
    gen.set_defaults(func=cmd_gen)

    def add_engine_options(p):
        p.add_argument("--method", choices=["incremental", "batch"], default="incremental")
        p.add_argument("--workers", type=int, default=None, help="thread count")

    analyze = sub.add_parser("analyze", help="compute the indicator trace of a panel")
    analyze.add_argument("--panel", required=True)
    analyze.add_argument("--k", type=int, required=True, help="window length")
    analyze.add_argument("--mode", choices=["pearson", "literal"], default="pearson")
    analyze.add_argument("--out", required=True, help="output trace CSV")
    add_engine_options(analyze)
    analyze.set_defaults(func=cmd_analyze)

    compare = sub.add_parser("compare", help="compare baseline and sanctioned strategies")
    compare.add_argument("--panel", required=True)
    compare.add_argument("--scenario", required=True, help="scenario file (JSON)")
    compare.add_argument("--out", required=True, help="output report (JSON)")
    compare.add_argument("--plots", help="directory for series CSVs and the SVG chart")
    add_engine_options(compare)
    compare.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which matches the input-error code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        _error(str(exc))
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
