"""Static SVG line plots. One polyline per series, no external dependencies.

Point coordinates are written with a fixed number of decimals so repeated
runs produce identical files, and tests can compare polylines structurally.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f")
_W, _H, _PAD = 480.0, 200.0, 40.0


def _panel(x, series, title: str, y0: float) -> list[str]:
    """One axes box at vertical offset ``y0`` holding ``series`` = [(label, y values)]."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(y, dtype=float) for _, y in series]
    lo = min(float(np.min(y)) for y in ys)
    hi = max(float(np.max(y)) for y in ys)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    x_lo, x_hi = float(x[0]), float(x[-1])
    x_span = (x_hi - x_lo) or 1.0
    left, top = _PAD * 1.5, y0 + _PAD

    out = [f'<text x="{left:.0f}" y="{y0 + _PAD * 0.6:.0f}" font-size="13">{escape(title)}</text>',
           f'<rect x="{left:.0f}" y="{top:.0f}" width="{_W:.0f}" height="{_H:.0f}" fill="none" stroke="#444"/>',
           f'<text x="{left - 4:.0f}" y="{top + 4:.0f}" font-size="10" text-anchor="end">{hi:.4g}</text>',
           f'<text x="{left - 4:.0f}" y="{top + _H:.0f}" font-size="10" text-anchor="end">{lo:.4g}</text>',
           f'<text x="{left:.0f}" y="{top + _H + 14:.0f}" font-size="10">{x_lo:.4g}</text>',
           f'<text x="{left + _W:.0f}" y="{top + _H + 14:.0f}" font-size="10" text-anchor="end">{x_hi:.4g}</text>']
    for i, ((label, _), y) in enumerate(zip(series, ys)):
        px = left + (x - x_lo) / x_span * _W
        py = top + (hi - y) / (hi - lo) * _H
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = COLORS[i % len(COLORS)]
        out.append(f'<polyline data-label="{escape(label)}" fill="none" stroke="{color}" '
                   f'stroke-width="1" points="{pts}"/>')
        out.append(f'<text x="{left + _W + 8:.0f}" y="{top + 12 + 14 * i:.0f}" font-size="11" '
                   f'fill="{color}">{escape(label)}</text>')
    return out


def line_plot(x, panels: list[tuple[str, list[tuple[str, np.ndarray]]]], max_points: int = 1000) -> str:
    """SVG document with one stacked panel per ``(title, [(label, y), ...])`` entry.

    Long series are decimated to at most ``max_points`` samples (the last
    sample is always kept).
    """
    x = np.asarray(x, dtype=float)
    idx = np.arange(x.size)
    if x.size > max_points:
        idx = np.unique(np.append(np.linspace(0, x.size - 1, max_points).round().astype(int), x.size - 1))
    height = len(panels) * (_H + 2 * _PAD) + _PAD
    width = _W + 4 * _PAD + 80
    body = []
    for k, (title, series) in enumerate(panels):
        sub = [(label, np.asarray(y)[idx]) for label, y in series]
        body += _panel(x[idx], sub, title, k * (_H + 2 * _PAD))
    return "\n".join([f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}">',
                      *body, "</svg>", ""])


def polylines(svg_text: str) -> dict[str, np.ndarray]:
    """Parse back the polylines of an SVG written by :func:`line_plot`, keyed by label."""
    import xml.etree.ElementTree as ET

    root = ET.fromstring(svg_text)
    out = {}
    for el in root.iter("{http://www.w3.org/2000/svg}polyline"):
        pts = [tuple(map(float, p.split(","))) for p in el.get("points").split()]
        out[el.get("data-label")] = np.array(pts)
    return out
