"""Deterministic SVG output for patches, self-similar tilings and curves.

Coordinates stay exact until emission, where they are printed with 12
significant digits.  The y axis points up: row 0 is drawn at the bottom.
"""
from __future__ import annotations

import colorsys
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Sequence
from xml.sax.saxutils import escape

from .core import Substitution, apply
from .exact import WeightVector
from .geometry import Polyline
from .product import PatchGrid

BINARY_PALETTE = {
    ("0", "0"): "#1f3a93",
    ("0", "1"): "#8ec5ff",
    ("1", "0"): "#f39c12",
    ("1", "1"): "#c0392b",
}
CURVE_COLORS = ("#1f3a93", "#c0392b", "#27ae60", "#8e44ad", "#f39c12", "#16a085")


def fmt(x) -> str:
    return f"{float(x):.12g}"


def hsl_wheel(n: int) -> list[str]:
    out = []
    for k in range(n):
        r, g, b = colorsys.hls_to_rgb(k / max(n, 1), 0.55, 0.65)
        out.append("#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255)))
    return out


def default_palette(pairs) -> dict:
    pairs = sorted(set(pairs))
    if set(pairs) <= set(BINARY_PALETTE):
        return dict(BINARY_PALETTE)
    return dict(zip(pairs, hsl_wheel(len(pairs))))


@dataclass
class RenderConfig:
    cell_unit: float = 20.0
    palette: dict | None = None
    stroke: str = "#222222"
    stroke_width: float = 0.5
    margin: float = 10.0
    diagonal: bool = True
    diagonal_color: str = "#000000"
    curve_colors: Sequence[str] = field(default=CURVE_COLORS)


def _document(width, height, body: list[str]) -> str:
    head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(width)}" '
            f'height="{fmt(height)}" viewBox="0 0 {fmt(width)} {fmt(height)}">\n')
    return head + "".join(line + "\n" for line in body) + "</svg>\n"


def _rect(x, y, w, h, fill, cfg: RenderConfig, label=None) -> str:
    title = f"<title>{escape(label)}</title>" if label else ""
    return (f'<rect x="{fmt(x)}" y="{fmt(y)}" width="{fmt(w)}" height="{fmt(h)}" fill="{fill}" '
            f'stroke="{cfg.stroke}" stroke-width="{fmt(cfg.stroke_width)}">{title}</rect>')


def _tiles(xs, ys, labels, cfg: RenderConfig) -> str:
    """Rectangles for columns ``xs`` and rows ``ys`` (boundary lists, exact)."""
    unit, m = cfg.cell_unit, cfg.margin
    xs, ys = [float(x) for x in xs], [float(y) for y in ys]
    total_h = ys[-1]
    palette = cfg.palette or default_palette(p for row in labels for p in row)
    body = []
    for r in range(len(ys) - 1):
        for c in range(len(xs) - 1):
            pair = labels[r][c]
            y_top = total_h - ys[r + 1]
            body.append(_rect(m + xs[c] * unit, m + y_top * unit, (xs[c + 1] - xs[c]) * unit,
                              (ys[r + 1] - ys[r]) * unit, palette.get(pair, "#cccccc"), cfg,
                              f"({pair[0]},{pair[1]})"))
    if cfg.diagonal:
        d = min(xs[-1], ys[-1])
        body.append(f'<line x1="{fmt(m)}" y1="{fmt(m + total_h * unit)}" '
                    f'x2="{fmt(m + d * unit)}" y2="{fmt(m + (total_h - d) * unit)}" '
                    f'stroke="{cfg.diagonal_color}" stroke-width="{fmt(2 * cfg.stroke_width)}"/>')
    return _document(xs[-1] * unit + 2 * m, total_h * unit + 2 * m, body)


def render_patch(grid: PatchGrid, cfg: RenderConfig | None = None) -> str:
    """One unit square per cell, coloured by its pair letter."""
    cfg = cfg or RenderConfig()
    xs = list(range(grid.width + 1))
    ys = list(range(grid.height + 1))
    return _tiles(xs, ys, [list(row) for row in grid.cells], cfg)


def render_selfsim(s: Substitution, w: WeightVector, k: int, cfg: RenderConfig | None = None,
                   seed=("0", "1")) -> str:
    """Rectangles scaled by ``w``: columns follow ``s^k(seed[0])``, rows ``s^k(seed[1])``."""
    cfg = cfg or RenderConfig()
    top, side = seed
    for _ in range(k):
        top, side = apply(s, top), apply(s, side)
    weight = {"0": w.w0, "1": w.w1}
    xs = [0] + list(accumulate(weight[a] for a in top))
    ys = [0] + list(accumulate(weight[a] for a in side))
    return _tiles(xs, ys, [[(x, y) for x in top] for y in side], cfg)


def column_widths(s: Substitution, w: WeightVector, k: int, seed: str = "0") -> list:
    word = seed
    for _ in range(k):
        word = apply(s, word)
    return [w.w0 if a == "0" else w.w1 for a in word]


def render_curves(polylines: Sequence[Polyline], cfg: RenderConfig | None = None,
                  labels: Sequence[str] | None = None) -> str:
    """Overlaid polylines with vertex dots and coordinate axes."""
    cfg = cfg or RenderConfig(cell_unit=100.0, margin=20.0)
    unit, m = cfg.cell_unit, cfg.margin
    xs = [x for p in polylines for x, _ in p.vertices] + [0, 1]
    ys = [y for p in polylines for _, y in p.vertices] + [0, 1]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    width, height = (x1 - x0) * unit + 2 * m, (y1 - y0) * unit + 2 * m

    def px(x, y):
        return m + (x - x0) * unit, m + (y1 - y) * unit

    ax, ay = px(0, 0)
    body = [f'<line x1="{fmt(m)}" y1="{fmt(ay)}" x2="{fmt(width - m)}" y2="{fmt(ay)}" '
            f'stroke="#888888" stroke-width="1"/>',
            f'<line x1="{fmt(ax)}" y1="{fmt(m)}" x2="{fmt(ax)}" y2="{fmt(height - m)}" '
            f'stroke="#888888" stroke-width="1"/>']
    for n, p in enumerate(polylines):
        color = cfg.curve_colors[n % len(cfg.curve_colors)]
        pts = [px(x, y) for x, y in p.vertices]
        label = f' data-label="{escape(labels[n])}"' if labels else ""
        if len(pts) == 2:
            (a, b), (c, d) = pts
            body.append(f'<line x1="{fmt(a)}" y1="{fmt(b)}" x2="{fmt(c)}" y2="{fmt(d)}" '
                        f'stroke="{color}" stroke-width="1.5"{label}/>')
        else:
            coords = " ".join(f"{fmt(a)},{fmt(b)}" for a, b in pts)
            body.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                        f'stroke-width="1.5"{label}/>')
        body.extend(f'<circle cx="{fmt(a)}" cy="{fmt(b)}" r="2" fill="{color}"/>' for a, b in pts)
    return _document(width, height, body)


def format_points(p: Polyline) -> str:
    """One ``x y`` pair per line, exact rationals."""
    return "".join(f"{x} {y}\n" for x, y in p.vertices)


def parse_points(text: str) -> Polyline:
    pts = []
    for line in text.splitlines():
        if line.strip():
            x, y = line.split()
            pts.append((Fraction(x), Fraction(y)))
    return Polyline(tuple(pts))
