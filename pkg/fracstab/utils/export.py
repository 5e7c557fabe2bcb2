"""Artifact writers for Fracstab.

Trajectory CSV, SVG line plots, certificate JSON and sweep CSV. Every writer
takes an optional path; without one the text goes to standard output.
"""

import csv
import io
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import typer

from fracstab.models.certificate import StabilityCertificate
from fracstab.models.enums import ReportMode
from fracstab.models.trajectory import Trajectory
from fracstab.services.sweep_service import SWEEP_COLUMNS, SweepRow

SVG_WIDTH = 800
SVG_HEIGHT = 600
SVG_MARGIN = {"left": 80, "right": 20, "top": 20, "bottom": 50}
SVG_MAX_POINTS = 2000
SVG_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"]

# Fields that only the paper-literal reading fills
PAPER_LITERAL_FIELDS = {
    "inv_norm_paper_literal",
    "paper_literal_M3",
    "paper_literal_product",
    "paper_literal_holds",
}


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        typer.echo(text, nl=False)
    else:
        path.write_text(text, encoding="utf-8")


def trajectory_csv(traj: Trajectory) -> str:
    """Trajectory as CSV text with header ``t,x1..xn,norm,k1,k2``."""
    header = ",".join(["t", *(f"x{i}" for i in range(1, traj.n + 1)), "norm", "k1", "k2"])
    table = np.column_stack([traj.times, traj.states, traj.norm_track, traj.k1_track, traj.k2_track])
    buffer = io.StringIO()
    np.savetxt(buffer, table, fmt="%.15g", delimiter=",", header=header, comments="")
    return buffer.getvalue()


def write_trajectory_csv(traj: Trajectory, path: Path | None = None) -> None:
    """Write the trajectory CSV to a file or standard output."""
    _emit(trajectory_csv(traj), path)


def trajectory_svg(traj: Trajectory, title: str = "") -> str:
    """Line plot of every state component against time.

    The document has an 800x600 view box, one polyline per component and
    axes labelled with their minimum and maximum.
    """
    finite = np.all(np.isfinite(traj.states), axis=1)
    times = traj.times[finite]
    states = traj.states[finite]
    if times.size > SVG_MAX_POINTS:
        keep = np.unique(np.linspace(0, times.size - 1, SVG_MAX_POINTS).astype(int))
        times = times[keep]
        states = states[keep]

    left = SVG_MARGIN["left"]
    top = SVG_MARGIN["top"]
    width = SVG_WIDTH - left - SVG_MARGIN["right"]
    height = SVG_HEIGHT - top - SVG_MARGIN["bottom"]
    t_min, t_max = (float(times.min()), float(times.max())) if times.size else (0.0, 1.0)
    y_min, y_max = (float(states.min()), float(states.max())) if states.size else (0.0, 1.0)
    if t_max == t_min:
        t_max = t_min + 1.0
    if y_max == y_min:
        y_min, y_max = y_min - 1.0, y_max + 1.0

    def px(t: float) -> float:
        return left + (t - t_min) / (t_max - t_min) * width

    def py(y: float) -> float:
        return top + (y_max - y) / (y_max - y_min) * height

    svg = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "viewBox": f"0 0 {SVG_WIDTH} {SVG_HEIGHT}",
            "width": str(SVG_WIDTH),
            "height": str(SVG_HEIGHT),
        },
    )
    if title:
        ET.SubElement(svg, "title").text = title
    ET.SubElement(svg, "rect", {"width": str(SVG_WIDTH), "height": str(SVG_HEIGHT), "fill": "white"})
    axes = {"stroke": "black", "stroke-width": "1"}
    bottom = top + height
    ET.SubElement(svg, "line", {"x1": str(left), "y1": str(bottom), "x2": str(left + width), "y2": str(bottom), **axes})
    ET.SubElement(svg, "line", {"x1": str(left), "y1": str(top), "x2": str(left), "y2": str(bottom), **axes})

    labels = [
        (left, bottom + 20, "start", f"{t_min:.6g}"),
        (left + width, bottom + 20, "end", f"{t_max:.6g}"),
        (left - 8, bottom, "end", f"{y_min:.6g}"),
        (left - 8, top + 10, "end", f"{y_max:.6g}"),
        (left + width / 2, bottom + 40, "middle", "t"),
    ]
    for x, y, anchor, text in labels:
        label = ET.SubElement(
            svg,
            "text",
            {"x": f"{x:.2f}", "y": f"{y:.2f}", "text-anchor": anchor, "font-size": "12", "font-family": "sans-serif"},
        )
        label.text = text

    for i in range(states.shape[1]):
        points = " ".join(f"{px(t):.2f},{py(y):.2f}" for t, y in zip(times.tolist(), states[:, i].tolist()))
        ET.SubElement(
            svg,
            "polyline",
            {
                "points": points,
                "fill": "none",
                "stroke": SVG_COLORS[i % len(SVG_COLORS)],
                "stroke-width": "1.5",
                "data-series": f"x{i + 1}",
            },
        )
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"


def write_trajectory_svg(traj: Trajectory, path: Path, title: str = "") -> None:
    """Write the SVG line plot to a file."""
    path.write_text(trajectory_svg(traj, title), encoding="utf-8")


def certificate_json(cert: StabilityCertificate, mode: ReportMode = ReportMode.BOTH) -> str:
    """Certificate report; the spectral mode leaves out the paper-literal fields."""
    exclude = PAPER_LITERAL_FIELDS if mode == ReportMode.SPECTRAL else None
    return cert.model_dump_json(indent=2, exclude=exclude) + "\n"


def write_certificate(cert: StabilityCertificate, path: Path | None = None, mode: ReportMode = ReportMode.BOTH) -> None:
    """Write the certificate JSON to a file or standard output."""
    _emit(certificate_json(cert, mode), path)


def sweep_csv(rows: list[SweepRow]) -> str:
    """Sweep rows as CSV text."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv_row())
    return buffer.getvalue()


def write_sweep_csv(rows: list[SweepRow], path: Path | None = None) -> None:
    """Write sweep rows to a file or standard output."""
    _emit(sweep_csv(rows), path)
