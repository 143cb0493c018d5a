"""Minimal static SVG band diagram (no plotting library needed)."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .band import BandStructure, GapReport

WIDTH, HEIGHT = 640, 480
MARGIN = dict(left=70, right=20, top=30, bottom=50)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _nice_ticks(lo, hi, target=6):
    span = hi - lo
    if span <= 0:
        return np.array([lo])
    raw = span / target
    mag = 10 ** np.floor(np.log10(raw))
    step = mag * min((s for s in (1, 2, 2.5, 5, 10) if s * mag >= raw), default=10)
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + 0.5 * step, step)


def band_svg(bands: BandStructure, gaps: GapReport | None = None, title: str = "") -> str:
    """Normalized frequency against path arclength, one polyline per band."""
    x = bands.arc
    y = bands.freq
    x0, x1 = float(x.min()), float(x.max())
    if x1 == x0:
        x1 = x0 + 1.0
    y0, y1 = 0.0, float(y.max()) * 1.05 or 1.0
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(v):
        return MARGIN["left"] + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return MARGIN["top"] + (1.0 - (v - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    if gaps is not None:
        for g in gaps:
            top, bot = sy(g.top), sy(g.bottom)
            out.append(f'<rect x="{sx(x0):.2f}" y="{top:.2f}" width="{pw:.2f}" '
                       f'height="{bot - top:.2f}" fill="#fde9a9" opacity="0.7"/>')
    for t in _nice_ticks(y0, y1):
        yy = sy(t)
        out.append(f'<line x1="{MARGIN["left"] - 4}" y1="{yy:.2f}" x2="{MARGIN["left"]}" y2="{yy:.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN["left"] - 7}" y="{yy + 4:.2f}" text-anchor="end">{t:g}</text>')
    for arc, label in bands.ticks:
        xx = sx(arc)
        out.append(f'<line x1="{xx:.2f}" y1="{MARGIN["top"]}" x2="{xx:.2f}" y2="{MARGIN["top"] + ph}" '
                   f'stroke="#999" stroke-dasharray="3,3"/>')
        out.append(f'<text x="{xx:.2f}" y="{MARGIN["top"] + ph + 18}" text-anchor="middle">{escape(label)}</text>')
    for j in range(y.shape[1]):
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y[:, j]))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{COLORS[j % len(COLORS)]}" stroke-width="1.5"/>')
    out.append(f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
               f'fill="none" stroke="black"/>')
    out.append(f'<text x="18" y="{MARGIN["top"] + ph / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {MARGIN["top"] + ph / 2:.2f})">normalized frequency</text>')
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_band_svg(path, bands: BandStructure, gaps: GapReport | None = None, title: str = "") -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(band_svg(bands, gaps, title))
