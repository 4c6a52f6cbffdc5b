"""Dependency-free SVG line charts of CSV time series.

The first CSV column is the x axis; every requested column becomes one
polyline.  Output is a pure function of the input, so repeated renders are
byte-identical.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from xml.sax.saxutils import escape

from .errors import MalformedCSV, MissingColumn

WIDTH, HEIGHT = 800, 500
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 170, 30, 50
PALETTE = ("#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
DASHES = ("", "6,3", "8,3,2,3", "2,2", "", "6,3", "8,3,2,3", "2,2")


def read_columns(text: str) -> tuple[list[str], list[list[float | None]]]:
    """Parse CSV text into a header and per-column value lists (None for empty cells)."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows:
        raise MalformedCSV("CSV is empty (no header)")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header) or any(not h for h in header):
        raise MalformedCSV("CSV header has empty or duplicate column names")
    columns: list[list[float | None]] = [[] for _ in header]
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise MalformedCSV(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        for j, cell in enumerate(row):
            cell = cell.strip()
            if cell == "":
                columns[j].append(None)
                continue
            try:
                value = float(cell)
            except ValueError:
                raise MalformedCSV(f"line {lineno}: non-numeric value {cell!r} in column {header[j]!r}") from None
            if not math.isfinite(value):
                raise MalformedCSV(f"line {lineno}: non-finite value in column {header[j]!r}")
            columns[j].append(value)
    return header, columns


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick positions covering [lo, hi] with steps of 1, 2 or 5 times a power of ten."""
    span = hi - lo
    raw = span / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [k * step for k in range(first, last + 1)]


def _range(values: list[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi - lo < 1e-12 * max(1.0, abs(lo), abs(hi)):
        pad = 0.5 * abs(lo) if lo else 1.0
        return lo - pad, hi + pad
    return lo, hi


def _tick_label(v: float) -> str:
    if v == 0:
        return "0"
    return f"{v:.6g}"


def render_svg_text(csv_text: str, columns: list[str], title: str | None = None) -> str:
    header, data = read_columns(csv_text)
    if not columns:
        raise MissingColumn("no columns requested")
    for col in columns:
        if col not in header:
            raise MissingColumn(f"column {col!r} not found in CSV (have: {', '.join(header)})")
    xs = data[0]
    if any(x is None for x in xs):
        raise MalformedCSV(f"x column {header[0]!r} has empty cells")
    series = []
    for col in columns:
        ys = data[header.index(col)]
        series.append([(x, y) for x, y in zip(xs, ys) if y is not None])

    all_x = [x for s in series for x, _ in s] or [0.0]
    all_y = [y for s in series for _, y in s] or [0.0]
    x_lo, x_hi = _range(all_x)
    y_lo, y_hi = _range(all_y)
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x):
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#000000" stroke-width="1"/>',
    ]
    if title:
        out.append(f'<text x="{MARGIN_LEFT + plot_w / 2:.2f}" y="{MARGIN_TOP - 10}" '
                   f'font-family="sans-serif" font-size="14" text-anchor="middle">{escape(title)}</text>')
    out.append('<g font-family="sans-serif" font-size="11" fill="#000000">')
    for v in nice_ticks(x_lo, x_hi):
        px = sx(v)
        out.append(f'<line x1="{px:.2f}" y1="{MARGIN_TOP + plot_h}" x2="{px:.2f}" '
                   f'y2="{MARGIN_TOP + plot_h + 5}" stroke="#000000"/>')
        out.append(f'<text x="{px:.2f}" y="{MARGIN_TOP + plot_h + 18}" '
                   f'text-anchor="middle">{_tick_label(v)}</text>')
    for v in nice_ticks(y_lo, y_hi):
        py = sy(v)
        out.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{py:.2f}" x2="{MARGIN_LEFT}" '
                   f'y2="{py:.2f}" stroke="#000000"/>')
        out.append(f'<text x="{MARGIN_LEFT - 8}" y="{py + 4:.2f}" '
                   f'text-anchor="end">{_tick_label(v)}</text>')
    out.append(f'<text x="{MARGIN_LEFT + plot_w / 2:.2f}" y="{HEIGHT - 10}" '
               f'text-anchor="middle">{escape(header[0])}</text>')
    out.append('</g>')

    for i, (col, pts) in enumerate(zip(columns, series)):
        color = PALETTE[i % len(PALETTE)]
        dash = DASHES[i % len(DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2"{dash_attr} '
                   f'points="{coords}"><title>{escape(col)}</title></polyline>')

    lx = WIDTH - MARGIN_RIGHT + 15
    out.append('<g font-family="sans-serif" font-size="12">')
    for i, col in enumerate(columns):
        ly = MARGIN_TOP + 15 + 20 * i
        color = PALETTE[i % len(PALETTE)]
        dash = DASHES[i % len(DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="2"{dash_attr}/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}">{escape(col)}</text>')
    out.append('</g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"


def render_svg(csv_path, columns: list[str], out_path, title: str | None = None) -> str:
    """Render ``columns`` of the CSV at ``csv_path`` and write the SVG to ``out_path``."""
    text = Path(csv_path).read_text(encoding="utf-8")
    svg = render_svg_text(text, list(columns), title=title)
    Path(out_path).write_text(svg, encoding="utf-8", newline="\n")
    return svg
