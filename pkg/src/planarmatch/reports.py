"""JSON / CSV / SVG output for experiment reports."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .montecarlo import ExperimentReport

SCHEMA_VERSION = 1

CSV_COLUMNS = {
    "dependent": ["trial", "n", "k", "t", "s", "T_n", "X_t"],
    "rainbow": ["trial", "n", "r", "R_n", "solver_exact"],
}


def dumps(reports: ExperimentReport | Sequence[ExperimentReport]) -> str:
    if isinstance(reports, ExperimentReport):
        payload = reports.to_dict()
    else:
        payload = {"schema_version": SCHEMA_VERSION, "sweep": [r.to_dict() for r in reports]}
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def loads(text: str) -> ExperimentReport | list[ExperimentReport]:
    data = json.loads(text)
    if "sweep" in data:
        return [ExperimentReport.from_dict(d) for d in data["sweep"]]
    return ExperimentReport.from_dict(data)


def write_json(path, reports) -> None:
    Path(path).write_text(dumps(reports), encoding="utf-8")


def csv_rows(report: ExperimentReport) -> list[list]:
    cfg = report.config
    rows = []
    if cfg["mode"] == "rainbow":
        for i, (size, exact) in enumerate(zip(report.samples["R_n"], report.samples["solver_exact"])):
            rows.append([i, cfg["n"], cfg["r"], size, int(exact)])
    else:
        t = cfg.get("t_resolved")
        s = cfg["k"] * t // cfg["n"] if t else ""
        xs = report.samples.get("X_t") or [""] * len(report.samples["T_n"])
        for i, (T, x) in enumerate(zip(report.samples["T_n"], xs)):
            rows.append([i, cfg["n"], cfg["k"], t if t else "", s, T, x])
    return rows


def write_csv(path, reports: Sequence[ExperimentReport]) -> None:
    mode = reports[0].config["mode"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(CSV_COLUMNS[mode])
        for rep in reports:
            writer.writerows(csv_rows(rep))


def svg_scatter(xs: Sequence[float], ys: Sequence[float], xlabel: str, ylabel: str,
                width: int = 480, height: int = 320) -> str:
    """A bare SVG 1.1 scatter with a connecting polyline and axis labels."""
    pad = 48
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    pts = [(px(x), py(y)) for x, y in zip(xs, ys)]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="14" y="{height / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {height / 2:.1f})">{escape(ylabel)}</text>',
        f'<text x="{pad}" y="{height - pad + 16}" text-anchor="middle">{x0:g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" text-anchor="middle">{x1:g}</text>',
        f'<text x="{pad - 6}" y="{height - pad}" text-anchor="end">{y0:g}</text>',
        f'<text x="{pad - 6}" y="{pad + 4}" text-anchor="end">{y1:.4g}</text>',
    ]
    if len(pts) > 1:
        poly = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        out.append(f'<polyline points="{poly}" fill="none" stroke="steelblue"/>')
    out += [f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="steelblue"/>' for x, y in pts]
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, reports: Sequence[ExperimentReport], statistic: str) -> None:
    xs = [rep.config["n"] for rep in reports]
    ys = [rep.statistics[statistic].mean for rep in reports]
    Path(path).write_text(svg_scatter(xs, ys, "n", f"mean {statistic}"), encoding="utf-8")
