"""Minimal SVG line plotter; keeps the CLI free of plotting dependencies."""

from __future__ import annotations

import math

import numpy as np

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 78, 24, 34, 56


def _ticks(lo: float, hi: float, count: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(count - 1, 1)
    # a span at round-off scale cannot be subdivided in floating point
    if raw <= 4e-15 * max(abs(lo), abs(hi)):
        return [lo, hi]
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * mag
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    vals = []
    k = math.ceil(lo / step)
    while k * step <= hi + 1e-9 * step and len(vals) < 4 * count:
        vals.append(k * step)
        k += 1
    return vals


def line_plot_svg(x, y, path: str, xlabel: str = "", ylabel: str = "",
                  title: str = "") -> None:
    """Write a single polyline plot of y against x to an SVG file."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = np.isfinite(x) & np.isfinite(y)
    x, y = x[keep], y[keep]
    if x.size == 0:
        raise ValueError("nothing to plot: no finite samples")
    xlo, xhi = float(x.min()), float(x.max())
    ylo, yhi = float(y.min()), float(y.max())
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi - ylo <= 1e-12 * max(1.0, abs(ylo), abs(yhi)):
        # constant column up to round-off; widen to a readable band
        pad = max(abs(ylo), 1.0)
        ylo, yhi = ylo - 0.5 * pad, yhi + 0.5 * pad
    else:
        pad = 0.05 * (yhi - ylo)
        ylo, yhi = ylo - pad, yhi + pad

    pw = _W - _ML - _MR
    ph = _H - _MT - _MB

    def px(v):
        return _ML + (v - xlo) / (xhi - xlo) * pw

    def py(v):
        return _MT + ph - (v - ylo) / (yhi - ylo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
        f'height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" '
        f'fill="none" stroke="black"/>',
    ]
    for v in _ticks(xlo, xhi):
        X = px(v)
        parts.append(f'<line x1="{X:.1f}" y1="{_MT + ph}" x2="{X:.1f}" '
                     f'y2="{_MT + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{X:.1f}" y="{_MT + ph + 18}" '
                     f'font-size="11" text-anchor="middle">{v:.4g}</text>')
    for v in _ticks(ylo, yhi):
        Y = py(v)
        parts.append(f'<line x1="{_ML - 5}" y1="{Y:.1f}" x2="{_ML}" '
                     f'y2="{Y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{_ML - 8}" y="{Y + 4:.1f}" font-size="11" '
                     f'text-anchor="end">{v:.4g}</text>')
    pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#1f4e9c" '
                 f'stroke-width="1.5"/>')
    if xlabel:
        parts.append(f'<text x="{_ML + pw / 2:.1f}" y="{_H - 14}" '
                     f'font-size="13" text-anchor="middle">{xlabel}</text>')
    if ylabel:
        cy = _MT + ph / 2
        parts.append(f'<text x="16" y="{cy:.1f}" font-size="13" '
                     f'text-anchor="middle" '
                     f'transform="rotate(-90 16 {cy:.1f})">{ylabel}</text>')
    if title:
        parts.append(f'<text x="{_ML + pw / 2:.1f}" y="20" font-size="14" '
                     f'text-anchor="middle">{title}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
