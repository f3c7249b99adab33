"""Report rendering: aligned text tables, CSV files, and figures.

CSV is the machine handoff; figures are rendered next to the CSV so a
report directory is self-contained. Matplotlib is imported lazily inside
the figure functions to keep library imports light.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

from .bench import BenchReport
from .costmodel import CostReport


def format_value(value) -> str:
    """Full-precision form, with a rounded display hint for floats."""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value!r} ({value:.4g})"
    return str(value)


def render_kv(rows: Iterable[tuple[str, object]]) -> str:
    rows = [(key, format_value(value)) for key, value in rows]
    width = max(len(key) for key, _ in rows)
    return "\n".join(f"{key:<{width}}  {value}" for key, value in rows)


def render_columns(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    table = [list(map(str, header))] + [[format_value(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = ["  ".join(f"{cell:<{widths[i]}}" for i, cell in enumerate(row)) for row in table]
    return "\n".join(lines)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(c) if isinstance(c, float) else c for c in row])


def cost_report_rows(report: CostReport) -> list[tuple[str, object]]:
    return [
        ("n_batches", report.n_batches),
        ("ram_batch_gb", report.ram_batch_gb),
        ("ram_params_gb", report.ram_params_gb),
        ("ram_otf_final_gb", report.ram_otf_final_gb),
        ("disk_pregen_gb", report.disk_pregen_gb),
        ("disk_otf_gb", report.disk_otf_gb),
        ("rw_pregen", report.rw_pregen),
        ("rw_otf", report.rw_otf),
        ("t_pregen_s", report.t_pregen_s),
        ("t_otf_s", report.t_otf_s),
        ("otf_time_ratio", report.otf_time_ratio),
        ("otf_saves_disk", report.otf_saves_disk),
        ("otf_saves_rw", report.otf_saves_rw),
        ("otf_saves_time", report.otf_saves_time),
        ("assumes_params_lt_dataset", report.assumes_params_lt_dataset),
        ("assumes_batch_gt_unit", report.assumes_batch_gt_unit),
    ]


def bench_report_rows(report: BenchReport) -> list[tuple[str, object, object]]:
    pg, otf = report.pregen, report.otf
    return [
        ("wall_seconds", pg.wall_seconds, otf.wall_seconds),
        ("read_instances", pg.counters.read_instances, otf.counters.read_instances),
        ("write_instances", pg.counters.write_instances, otf.counters.write_instances),
        ("total_instances", pg.counters.total_instances, otf.counters.total_instances),
        ("expected_instances", report.rw_expected_pregen, report.rw_expected_otf),
        ("bytes_read", pg.counters.bytes_read, otf.counters.bytes_read),
        ("bytes_written", pg.counters.bytes_written, otf.counters.bytes_written),
        ("total_disk_bytes", pg.total_disk_bytes, otf.total_disk_bytes),
        ("peak_batch_bytes", pg.peak_batch_bytes, otf.peak_batch_bytes),
        ("checksum", f"{pg.checksum:#010x}", f"{otf.checksum:#010x}"),
    ]


def bench_verdict_rows(report: BenchReport) -> list[tuple[str, object]]:
    return [
        ("checksums_match", report.checksums_match),
        ("rw_matches_model", report.rw_matches_model),
        ("verdict_disk", report.verdict_disk),
        ("verdict_rw", report.verdict_rw),
        ("verdict_time", report.verdict_time),
    ]


def figure_path_for(csv_path: str | Path) -> Path:
    return Path(csv_path).with_suffix(".png")


def save_cost_figure(report: CostReport, path: str | Path) -> None:
    """Bar comparison of disk, transfer instances, and cycle time."""
    plt = _plt()
    fig, axes = plt.subplots(1, 3, figsize=(9.5, 3.2))
    panels = [
        ("disk (GB)", report.disk_pregen_gb, report.disk_otf_gb),
        ("transfer instances", report.rw_pregen, report.rw_otf),
        ("cycle time (s)", report.t_pregen_s, report.t_otf_s),
    ]
    for ax, (title, pg, otf) in zip(axes, panels):
        ax.bar(["pre-gen", "streamed"], [pg, otf], color=["#b5543b", "#3b73b5"])
        ax.set_title(title, fontsize=10)
        ax.set_yscale("log")
        ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bench_figure(report: BenchReport, path: str | Path) -> None:
    """Measured pipeline comparison with the model prediction beside it."""
    plt = _plt()
    fig, axes = plt.subplots(1, 3, figsize=(9.5, 3.2))
    pg, otf = report.pregen, report.otf
    panels = [
        ("disk bytes", pg.total_disk_bytes, otf.total_disk_bytes),
        ("transfer instances", pg.counters.total_instances, otf.counters.total_instances),
        ("wall seconds", pg.wall_seconds, otf.wall_seconds),
    ]
    for ax, (title, a, b) in zip(axes, panels):
        ax.bar(["pre-gen", "streamed"], [a, b], color=["#b5543b", "#3b73b5"])
        ax.set_title(f"measured {title}", fontsize=10)
        ax.set_yscale("log")
        ax.grid(axis="y", alpha=0.3)
    axes[1].axhline(report.rw_expected_pregen, color="#b5543b", ls="--", lw=1)
    axes[1].axhline(report.rw_expected_otf, color="#3b73b5", ls="--", lw=1)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_loss_figure(losses: Sequence[float], accuracy: float | None, path: str | Path) -> None:
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(range(1, len(losses) + 1), losses, marker="o", ms=3)
    ax.set_xlabel("epoch")
    ax.set_ylabel("mean squared error")
    title = "training loss"
    if accuracy is not None:
        title += f" (test accuracy {accuracy:.3f})"
    ax.set_title(title, fontsize=10)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt
