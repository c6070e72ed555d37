"""Minimal deterministic SVG line plots (no plotting library needed)."""

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=170, top=20, bottom=50)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _ticks(lo, hi, log):
    if log:
        return [10.0**k for k in range(math.floor(lo), math.ceil(hi) + 1)]
    if hi == lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / 2))
    for mult in (1, 2, 5, 10):
        if (hi - lo) / (step * mult) <= 6:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def line_plot(series, xlabel="x", ylabel="y", log=False):
    """Render ``{label: [(x, y), ...]}`` as an SVG string; log-log axes when ``log``.

    Output is byte-identical for identical input.
    """
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]
    tf = math.log10 if log else (lambda v: v)
    pts = [(tf(x), tf(y)) for data in series.values() for x, y in data]
    if pts:
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def sx(v):
        return MARGIN["left"] + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return MARGIN["top"] + (1 - (v - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1, log):
        v = math.log10(t) if log else t
        if x0 - 1e-12 <= v <= x1 + 1e-12:
            out.append(f'<text x="{sx(v):.2f}" y="{HEIGHT - MARGIN["bottom"] + 18}" font-size="11" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1, log):
        v = math.log10(t) if log else t
        if y0 - 1e-12 <= v <= y1 + 1e-12:
            out.append(f'<text x="{MARGIN["left"] - 6}" y="{sy(v) + 4:.2f}" font-size="11" text-anchor="end">{t:g}</text>')
            out.append(f'<line x1="{MARGIN["left"]}" y1="{sy(v):.2f}" x2="{MARGIN["left"] + pw}" y2="{sy(v):.2f}" stroke="#ddd"/>')
    out.append(f'<text x="{MARGIN["left"] + pw / 2:.2f}" y="{HEIGHT - 10}" font-size="13" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{MARGIN["top"] + ph / 2:.2f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {MARGIN["top"] + ph / 2:.2f})">{escape(ylabel)}</text>'
    )
    for i, (label, data) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        coords = " ".join(f"{sx(tf(x)):.2f},{sy(tf(y)):.2f}" for x, y in data)
        out.append(f'<polyline class="series" fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        for x, y in data:
            out.append(f'<circle cx="{sx(tf(x)):.2f}" cy="{sy(tf(y)):.2f}" r="2.5" fill="{color}"/>')
        ly = MARGIN["top"] + 14 + 18 * i
        lx = WIDTH - MARGIN["right"] + 12
        out.append(f'<g class="legend"><line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
                   f'<text x="{lx + 24}" y="{ly}" font-size="11">{escape(label)}</text></g>')  # fmt: skip
    out.append("</svg>")
    return "\n".join(out) + "\n"
