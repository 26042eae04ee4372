"""Self-contained SVG line charts of a results-CSV metric against load factor."""

from __future__ import annotations

import csv
from collections import defaultdict
from html import escape
from typing import TextIO

from .bench import RESULTS_HEADER

PLOTTABLE = ("mean_probes", "stddev_probes", "max_probes", "p99_probes", "mem_bytes", "wall_nanos")
AXIS_LABELS = {
    "mean_probes": "mean probe count",
    "stddev_probes": "probe count stddev",
    "max_probes": "worst-case probe count",
    "p99_probes": "p99 probe count",
    "mem_bytes": "memory (bytes, accounted)",
    "wall_nanos": "wall time (ns)",
}
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 150, 40, 50


class SchemaError(ValueError):
    pass


def read_series(fh: TextIO, metric: str, op_kind: str) -> dict[str, list[tuple[float, float]]]:
    """Mean of ``metric`` over trials per (strategy, target_alpha), for one op kind."""
    if metric not in PLOTTABLE:
        raise SchemaError(f"metric must be one of {', '.join(PLOTTABLE)}")
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None or tuple(header) != RESULTS_HEADER:
        raise SchemaError("input is not a results CSV (header mismatch)")
    col = RESULTS_HEADER.index(metric)
    acc: dict[str, dict[float, list[float]]] = defaultdict(lambda: defaultdict(list))
    order: list[str] = []
    n_rows = 0
    for row in reader:
        if not row:
            continue
        if len(row) != len(RESULTS_HEADER):
            raise SchemaError(f"row has {len(row)} fields, expected {len(RESULTS_HEADER)}")
        n_rows += 1
        if row[6] != op_kind:
            continue
        try:
            alpha, value = float(row[2]), float(row[col])
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
        if row[0] not in acc:
            order.append(row[0])
        acc[row[0]][alpha].append(value)
    if n_rows == 0:
        raise SchemaError("results CSV has no data rows")
    if not order:
        raise SchemaError(f"no rows with op_kind {op_kind!r}")
    return {
        name: [(a, sum(v) / len(v)) for a, v in sorted(acc[name].items())]
        for name in order
    }


def _nice_max(v: float) -> float:
    if v <= 0:
        return 1.0
    mag = 10 ** len(str(int(v))) / 10
    for mult in (1, 2, 2.5, 5, 10):
        if mult * mag >= v:
            return mult * mag
    return 10 * mag


def render_svg(series: dict[str, list[tuple[float, float]]], metric: str, op_kind: str) -> str:
    ymax = _nice_max(max(y for pts in series.values() for _, y in pts))
    xmin, xmax = 0.0, 1.0
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(x: float) -> float:
        return LEFT + (x - xmin) / (xmax - xmin) * pw

    def sy(y: float) -> float:
        return TOP + ph - y / ymax * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">'
        f'{escape(AXIS_LABELS[metric])} vs load factor ({escape(op_kind)})</text>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>',
    ]
    for i in range(11):
        x = i / 10
        out.append(f'<line x1="{sx(x):.1f}" y1="{TOP + ph}" x2="{sx(x):.1f}" y2="{TOP + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{sx(x):.1f}" y="{TOP + ph + 18}" text-anchor="middle">{x:.1f}</text>')
    for i in range(6):
        y = ymax * i / 5
        out.append(f'<line x1="{LEFT - 4}" y1="{sy(y):.1f}" x2="{LEFT}" y2="{sy(y):.1f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{sy(y) + 4:.1f}" text-anchor="end">{y:g}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">load factor</text>')
    out.append(
        f'<text x="16" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {TOP + ph / 2:.1f})">{escape(AXIS_LABELS[metric])}</text>'
    )
    for i, (name, pts) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        coords = " ".join(f"{sx(a):.2f},{sy(v):.2f}" for a, v in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}" data-strategy="{escape(name)}"/>')
        ly = TOP + 16 + 18 * i
        out.append(f'<line x1="{LEFT + pw + 12}" y1="{ly}" x2="{LEFT + pw + 32}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{LEFT + pw + 38}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
