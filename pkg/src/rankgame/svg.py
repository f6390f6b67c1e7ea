"""Minimal SVG line chart with no external dependencies."""

from __future__ import annotations

import math
from typing import Mapping, Sequence

WIDTH, HEIGHT = 800, 600
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 170, 50, 70
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    first = math.ceil(lo / step) * step
    out = []
    x = first
    while x <= hi + step * 1e-9:
        out.append(0.0 if abs(x) < step * 1e-9 else x)
        x += step
    return out


def line_chart(series: Mapping[str, Sequence[tuple[float, float]]], title: str = "",
               x_label: str = "", y_label: str = "") -> str:
    """Render one polyline per series. Non-finite points split a line into segments."""
    points = [(x, y) for pts in series.values() for x, y in pts if math.isfinite(x) and math.isfinite(y)]
    if not points:
        raise ValueError("no finite points to plot")
    x_lo, x_hi = min(p[0] for p in points), max(p[0] for p in points)
    y_lo, y_hi = min(p[1] for p in points), max(p[1] for p in points)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    pad = (y_hi - y_lo) * 0.05 or max(abs(y_hi) * 0.05, 0.5)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

    def px(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * (right - left)

    def py(y: float) -> float:
        return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{(left + right) / 2:.1f}" y="{top - 20}" text-anchor="middle" font-size="16">{_escape(title)}</text>',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{bottom}" x2="{x:.2f}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{bottom + 20}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        out.append(f'<line x1="{left - 5}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{right}" y2="{y:.2f}" stroke="#e0e0e0"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{(left + right) / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle">{_escape(x_label)}</text>')
    out.append(f'<text x="20" y="{(top + bottom) / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 20 {(top + bottom) / 2:.1f})">{_escape(y_label)}</text>')

    for k, (name, pts) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        segment: list[str] = []
        segments = [segment]
        for x, y in pts:
            if math.isfinite(x) and math.isfinite(y):
                segment.append(f"{px(x):.2f},{py(y):.2f}")
            elif segment:
                segment = []
                segments.append(segment)
        for seg in segments:
            if seg:
                out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{" ".join(seg)}"/>')
        ly = top + 20 * k + 10
        out.append(f'<line x1="{right + 15}" y1="{ly}" x2="{right + 40}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{right + 45}" y="{ly + 4}">{_escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
