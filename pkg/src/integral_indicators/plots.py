"""Epoch series of the summed indicator per strategy, as CSV and a static SVG."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .panel import format_float  # noqa: E402
from .strategy import ScenarioReport  # noqa: E402


def _slug(label: str) -> str:
    keep = "".join(c if c.isalnum() else "_" for c in label).strip("_")
    return keep or "strategy"


def write_series_csv(path: Path, epochs, sums) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["epoch", "sum_g"])
        for t, s in zip(epochs, sums):
            writer.writerow([t, format_float(s)])


def write_plots(report: ScenarioReport, plot_dir: str | Path) -> list[Path]:
    """Write one series CSV per strategy and an overlay chart; return the paths."""
    plot_dir = Path(plot_dir)
    plot_dir.mkdir(parents=True, exist_ok=True)
    written = []
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for n, (label, trace) in enumerate(zip(report.strategy_labels, report.traces), start=1):
        sums = trace.epoch_sums()
        path = plot_dir / f"strategy{n}_{_slug(label)}.csv"
        write_series_csv(path, trace.epochs, sums)
        written.append(path)
        ax.plot(trace.epochs, sums, marker="o", markersize=3, label=f"{label} (G={trace.g_total:.6g})")
    ax.set_xlabel("epoch t")
    ax.set_ylabel("sum_i G_i(t)")
    ax.set_title(f"delta_g = {report.delta_g:.6g}")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    svg = plot_dir / "indicator_dynamics.svg"
    with plt.rc_context({"svg.hashsalt": "integral-indicators"}):
        fig.savefig(svg, format="svg", metadata={"Date": None})
    plt.close(fig)
    written.append(svg)
    return written
