"""Delimited output, plot-description sidecars and rendered figures.

CSV files are RFC-4180 style with LF line endings and floats printed with
17 significant digits, so repeated runs of the same sweep are bit-identical
and every stored double round-trips exactly.  Each figure dataset gets a
plain-text sidecar describing axes, labels and series so any plotting tool
can consume the CSV; a rendered PNG is written alongside.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .sweep import PointStatus, SweepRecord, SweepSpec, axis_unit

MEASURE_COLUMNS = (
    ("nu_tilde_minus [1]", "nu_tilde_minus"),
    ("log_negativity [nat]", "log_negativity"),
    ("discord [nat]", "discord"),
    ("mutual_information [nat]", "mutual_information"),
)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def csv_header(spec: SweepSpec) -> list[str]:
    header = [f"{name} [{axis_unit(name)}]" for name in spec.varied_names]
    header += ["n_cav [1]", "delta_ratio [omega_m]", "stable [0/1]"]
    header += [label for label, _ in MEASURE_COLUMNS]
    header += ["classical_correlation [nat]", "w_branch [-]", "status [-]"]
    return header


def record_row(spec: SweepSpec, rec: SweepRecord) -> list[str]:
    row = [_fmt(rec.varied[name]) for name in spec.varied_names]
    row += [_fmt(rec.photon_number), _fmt(rec.detuning_ratio), "1" if rec.stable else "0"]
    if rec.report is None:
        row += [""] * (len(MEASURE_COLUMNS) + 2)
    else:
        r = rec.report
        row += [_fmt(getattr(r, attr)) for _, attr in MEASURE_COLUMNS]
        row += [_fmt(r.mutual_information - r.discord), r.discord_branch.value]
    row.append(rec.status.value)
    return row


def write_records_csv(path: str | Path, spec: SweepSpec, records: list[SweepRecord]) -> None:
    """Write one sweep to CSV (header row with units, LF endings)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(csv_header(spec))
        for rec in records:
            writer.writerow(record_row(spec, rec))


@dataclass(frozen=True)
class FigureLayout:
    """How to plot one figure dataset: axes, labels and series mapping."""

    name: str
    title: str
    kind: str  # "lines" or "heatmap"
    x_axis: str  # swept axis providing the x coordinate
    x_label: str
    x_transform: float  # multiply stored values by this for display
    y_measure: str  # measure attribute plotted on y (lines) or colour (heatmap)
    y_label: str
    series_labels: tuple[str, ...] = ()  # one per overlay value, if any
    heat_y_axis: str | None = None  # second axis for heatmaps
    heat_y_label: str | None = None
    heat_y_transform: float = 1.0


def write_sidecar(path: str | Path, layout: FigureLayout, spec: SweepSpec, csv_name: str) -> None:
    """Write the plain-text plot description next to the CSV."""
    lines = [
        f"title = {layout.title}",
        f"data = {csv_name}",
        f"kind = {layout.kind}",
        f"x_column = {layout.x_axis} [{axis_unit(layout.x_axis)}]",
        f"x_label = {layout.x_label}",
        f"x_display_scale = {_fmt(layout.x_transform)}",
    ]
    if layout.kind == "heatmap":
        lines += [
            f"y_column = {layout.heat_y_axis} [{axis_unit(layout.heat_y_axis)}]",
            f"y_label = {layout.heat_y_label}",
            f"y_display_scale = {_fmt(layout.heat_y_transform)}",
            f"z_column = {_measure_column(layout.y_measure)}",
            f"z_label = {layout.y_label}",
        ]
    else:
        lines += [
            f"y_column = {_measure_column(layout.y_measure)}",
            f"y_label = {layout.y_label}",
        ]
    if spec.overlay is not None:
        lines.append(f"series_column = {spec.overlay.name} [{axis_unit(spec.overlay.name)}]")
        pairs = (
            f"{_fmt(v)}: {label}"
            for v, label in zip(spec.overlay.values, layout.series_labels)
        )
        lines.append("series = " + " | ".join(pairs))
    lines.append("note = points with status != ok carry empty measure fields")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _measure_column(measure: str) -> str:
    for label, attr in MEASURE_COLUMNS:
        if attr == measure:
            return label
    raise KeyError(measure)


def render_figure(
    path: str | Path,
    layout: FigureLayout,
    spec: SweepSpec,
    records: list[SweepRecord],
    dpi: int = 150,
) -> None:
    """Render one figure dataset to an image file."""
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0), constrained_layout=True)
    if layout.kind == "heatmap":
        _render_heatmap(ax, fig, layout, spec, records)
    else:
        _render_lines(ax, layout, spec, records)
    ax.set_title(layout.title)
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def _render_lines(ax, layout: FigureLayout, spec: SweepSpec, records: list[SweepRecord]) -> None:
    groups: dict[float | None, list[SweepRecord]] = {}
    for rec in records:
        key = rec.varied[spec.overlay.name] if spec.overlay is not None else None
        groups.setdefault(key, []).append(rec)
    labels = dict(zip(spec.overlay.values, layout.series_labels)) if spec.overlay else {}
    for key, recs in groups.items():
        x = np.array([r.varied[layout.x_axis] for r in recs]) * layout.x_transform
        y = np.array([r.measure(layout.y_measure) for r in recs])
        ax.plot(x, y, label=labels.get(key))
    ax.set_xlabel(layout.x_label)
    ax.set_ylabel(layout.y_label)
    if labels:
        ax.legend()
    ax.grid(True, alpha=0.3)


def _render_heatmap(ax, fig, layout: FigureLayout, spec: SweepSpec, records: list[SweepRecord]) -> None:
    ax1, ax2 = spec.axes
    # records run row-major over (axis1, axis2)
    x = ax1.values() * layout.x_transform
    y = ax2.values() * layout.heat_y_transform
    z = np.array([r.measure(layout.y_measure) for r in records]).reshape(ax1.count, ax2.count)
    mesh = ax.pcolormesh(x, y, z.T, shading="nearest")
    fig.colorbar(mesh, ax=ax, label=layout.y_label)
    ax.set_xlabel(layout.x_label)
    ax.set_ylabel(layout.heat_y_label)
