"""Benchmark report writers: CSV rows, Markdown pivot table, summary figure."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_COLUMNS = ("image", "method", "ratio", "sdr", "sdr_mode", "runtime_s", "output")


def write_report_files(report, report_dir: Path) -> None:
    """Write report.csv, report.md, and report.png under ``report_dir``."""
    report_dir = Path(report_dir)
    report_dir.mkdir(parents=True, exist_ok=True)
    write_csv(report, report_dir / "report.csv")
    write_markdown(report, report_dir / "report.md")
    if report.rows:
        write_figure(report, report_dir / "report.png")


def write_csv(report, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            writer.writerow(
                (
                    row.image,
                    row.method,
                    row.ratio_label,
                    "NA" if row.sdr is None else f"{row.sdr:.6f}",
                    row.sdr_mode,
                    f"{row.runtime_s:.4f}",
                    row.output_path,
                )
            )


def write_markdown(report, path: Path) -> None:
    """Mean-SDR pivot: one row per method, one column per ratio."""
    means = report.mean_sdr()
    lines = [
        f"# Mean SDR by method and ratio ({report.sdr_mode} mode)",
        "",
        "| Method | " + " | ".join(report.ratios) + " |",
        "|---" * (len(report.ratios) + 1) + "|",
    ]
    for method in report.methods:
        cells = []
        for ratio in report.ratios:
            value = means.get((method, ratio))
            cells.append("n/a" if value is None else f"{value:.3f}")
        lines.append(f"| {method} | " + " | ".join(cells) + " |")
    if report.skipped:
        lines += ["", f"Skipped items: {len(report.skipped)}"]
    path.write_text("\n".join(lines) + "\n")


def write_figure(report, path: Path) -> None:
    """Grouped bar chart of mean SDR, methods grouped within each ratio."""
    means = report.mean_sdr()
    n_ratios = len(report.ratios)
    n_methods = len(report.methods)
    if n_ratios == 0 or n_methods == 0:
        return
    width = 0.8 / n_methods
    fig, ax = plt.subplots(figsize=(1.8 + 1.6 * n_ratios, 3.6))
    for i, method in enumerate(report.methods):
        xs = [j + (i - (n_methods - 1) / 2) * width for j in range(n_ratios)]
        ys = [means.get((method, ratio), 0.0) or 0.0 for ratio in report.ratios]
        ax.bar(xs, ys, width=width, label=method)
    ax.set_xticks(range(n_ratios))
    ax.set_xticklabels(report.ratios)
    ax.set_ylabel(f"mean SDR ({report.sdr_mode})")
    ax.set_xlabel("target ratio")
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
