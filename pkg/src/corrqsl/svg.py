"""Minimal SVG plots of sweep results: curves for 1-D sweeps (or 2-D sweeps
with a short second axis) and grayscale cell maps otherwise."""
import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 80, 130, 40, 60
MAX_CURVES = 8
_STROKES = ("#1f4e79", "#b22222", "#2e7d32", "#6a1b9a", "#ef6c00", "#00838f", "#5d4037", "#424242")


def _num(x):
    return f"{x:.2f}"


def _label(x):
    return f"{x:.3g}"


class _Scale:
    def __init__(self, lo, hi, a, b, log=False):
        self.log = log and lo > 0
        if self.log:
            lo, hi = math.log10(lo), math.log10(hi)
        if not hi > lo:
            lo, hi = lo - 0.5, hi + 0.5
        self.lo, self.hi, self.a, self.b = lo, hi, a, b

    def __call__(self, x):
        if self.log:
            x = math.log10(x)
        return self.a + (x - self.lo) / (self.hi - self.lo) * (self.b - self.a)

    def ticks(self, n=5):
        vals = np.linspace(self.lo, self.hi, n)
        return [10.0**v for v in vals] if self.log else list(vals)


def _frame(parts, xs, ys, xlabel, ylabel, title):
    x0, x1 = LEFT, WIDTH - RIGHT
    y0, y1 = HEIGHT - BOTTOM, TOP
    parts.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
                 'fill="none" stroke="black"/>')
    for v in xs.ticks():
        px = _num(xs(v))
        parts.append(f'<line x1="{px}" y1="{y0}" x2="{px}" y2="{y0 + 5}" stroke="black"/>')
        parts.append(f'<text x="{px}" y="{y0 + 18}" text-anchor="middle" font-size="11">{_label(v)}</text>')
    for v in ys.ticks():
        py = _num(ys(v))
        parts.append(f'<line x1="{x0 - 5}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 8}" y="{py}" text-anchor="end" dominant-baseline="middle" '
                     f'font-size="11">{_label(v)}</text>')
    parts.append(f'<text x="{(x0 + x1) / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle" '
                 f'font-size="13">{escape(xlabel)}</text>')
    parts.append(f'<text x="18" y="{(y0 + y1) / 2:.2f}" text-anchor="middle" font-size="13" '
                 f'transform="rotate(-90 18 {(y0 + y1) / 2:.2f})">{escape(ylabel)}</text>')
    parts.append(f'<text x="{(x0 + x1) / 2:.2f}" y="22" text-anchor="middle" font-size="14">'
                 f'{escape(title)}</text>')


def _curves(result, title):
    spec = result.spec
    grid = result.grid()
    ax0 = spec.axes[0]
    xv = ax0.values()
    if grid.ndim == 1:
        series = [(None, grid)]
    else:
        ax1 = spec.axes[1]
        series = [(f"{ax1.name}={_label(v)}", grid[:, j]) for j, v in enumerate(ax1.values())]
    finite = np.concatenate([s[np.isfinite(s)] for _, s in series])
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    xs = _Scale(ax0.min, ax0.max, LEFT, WIDTH - RIGHT, ax0.scale == "log")
    ys = _Scale(lo, hi, HEIGHT - BOTTOM, TOP)
    parts = []
    _frame(parts, xs, ys, ax0.name, spec.metric, title)
    for k, (name, ys_vals) in enumerate(series):
        pts = " ".join(f"{_num(xs(x))},{_num(ys(y))}" for x, y in zip(xv, ys_vals) if math.isfinite(y))
        colour = _STROKES[k % len(_STROKES)]
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        if name is not None:
            ly = TOP + 16 * (k + 1)
            parts.append(f'<text x="{WIDTH - RIGHT + 10}" y="{ly}" font-size="11" fill="{colour}">'
                         f'{escape(name)}</text>')
    return parts


def _cellmap(result, title):
    spec = result.spec
    grid = result.grid()
    ax0, ax1 = spec.axes
    finite = grid[np.isfinite(grid)]
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    span = hi - lo if hi > lo else 1.0
    xs = _Scale(ax0.min, ax0.max, LEFT, WIDTH - RIGHT, ax0.scale == "log")
    ys = _Scale(ax1.min, ax1.max, HEIGHT - BOTTOM, TOP, ax1.scale == "log")
    parts = []
    cw = (WIDTH - RIGHT - LEFT) / ax0.count
    ch = (HEIGHT - BOTTOM - TOP) / ax1.count
    for i in range(ax0.count):
        for j in range(ax1.count):
            v = grid[i, j]
            if math.isfinite(v):
                level = int(round(255 * (1.0 - (v - lo) / span)))
                fill = f"rgb({level},{level},{level})"
            else:
                fill = "rgb(255,0,0)"
            parts.append(f'<rect x="{_num(LEFT + i * cw)}" y="{_num(TOP + (ax1.count - 1 - j) * ch)}" '
                         f'width="{_num(cw)}" height="{_num(ch)}" fill="{fill}"/>')
    _frame(parts, xs, ys, ax0.name, ax1.name, title)
    parts.append(f'<text x="{WIDTH - RIGHT + 10}" y="{TOP + 16}" font-size="11">'
                 f'{escape(spec.metric)}</text>')
    parts.append(f'<text x="{WIDTH - RIGHT + 10}" y="{TOP + 32}" font-size="11">black = {_label(hi)}</text>')
    parts.append(f'<text x="{WIDTH - RIGHT + 10}" y="{TOP + 48}" font-size="11">white = {_label(lo)}</text>')
    return parts


def sweep_to_svg(result, title=""):
    spec = result.spec
    as_curves = len(spec.axes) == 1 or spec.axes[1].count <= MAX_CURVES
    body = _curves(result, title) if as_curves else _cellmap(result, title)
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">')
    return "\n".join(['<?xml version="1.0" encoding="UTF-8"?>', head,
                      f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>', *body, "</svg>"]) + "\n"
