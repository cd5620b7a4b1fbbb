"""Standalone SVG 1.1 figures of tessellations, unfoldings and folded orbits.

Drawing uses the true metric: a scaled point (x, y) is drawn at (x, y*sqrt 3)
with u = 1, then flipped so y points up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from gmpy2 import mpq

from . import __version__
from .fence import contact_points
from .geometry import InclineClass, ScaledPoint, rat
from .orbits import Status, detect_period_unfolding, fold_offset, pair, pull_back, unfold_trace
from .tessellation import ShapeId, _polygon_edges, get

SQRT3 = math.sqrt(3)

CLASS_STYLE = {
    InclineClass.H0: "#555555",
    InclineClass.D30: "#1f77b4",
    InclineClass.D60: "#2ca02c",
    InclineClass.V90: "#9467bd",
    InclineClass.D120: "#8c564b",
    InclineClass.D150: "#17becf",
}
BARRIER_COLOR = "#d62728"
GATE_COLOR = "#2ca02c"


@dataclass
class RenderSpec:
    viewport: tuple  # (xmin, xmax, ymin, ymax) in scaled coordinates
    layers: set = field(default_factory=lambda: {"tessellation", "fundamental", "unfolding",
                                                 "fold", "contacts"})
    scale: float = 60.0  # pixels per u
    styles: dict = field(default_factory=lambda: dict(CLASS_STYLE))


def _f(v) -> str:
    return f"{float(v):.3f}"


class _Canvas:
    def __init__(self, xmin, xmax, ymin, ymax, scale, ox=0.0, oy=0.0):
        self.xmin, self.ymax = float(xmin), float(ymax)
        self.scale = scale
        self.ox, self.oy = ox, oy
        self.width = (float(xmax) - self.xmin) * scale
        self.height = (self.ymax - float(ymin)) * SQRT3 * scale

    def pt(self, p) -> str:
        x = self.ox + (float(p[0]) - self.xmin) * self.scale
        y = self.oy + (self.ymax - float(p[1])) * SQRT3 * self.scale
        return f"{x:.3f},{y:.3f}"


def _polyline(c: _Canvas, pts, color, width=1.0, closed=False, extra="") -> str:
    tag = "polygon" if closed else "polyline"
    coords = " ".join(c.pt(p) for p in pts)
    return (f'<{tag} points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"{extra}/>')


def _tessellation_layer(c: _Canvas, shape: ShapeId, box, styles) -> list:
    tess = get(shape)
    segs = set()
    for poly in tess.tiles_in_box(*box):
        for p, q, line in _polygon_edges(poly):
            segs.add((min(p, q), max(p, q), line.cls))
    out = []
    for p, q, cls in sorted(segs, key=lambda s: (s[0], s[1], s[2].value)):
        out.append(_polyline(c, (p, q), styles[cls], 0.6))
    return out


def render(shape, x, y, offset="1/2", mode: str = "both", t_max=None,
           layout: Optional[RenderSpec] = None) -> str:
    """SVG text for the orbit whose unfolding starts at (offset, 0)."""
    shape = ShapeId.parse(shape) if isinstance(shape, str) else shape
    d = pair(x, y)
    a = rat(offset)
    tess = get(shape)
    if mode not in ("unfold", "fold", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    P = ScaledPoint(a, mpq(0))
    if t_max is None:
        if shape is not ShapeId.HEXAGON:
            res = detect_period_unfolding(tess, a, d)
            t_max = res.T if res.status is Status.PERIODIC else 2 * max(d.x, 1)
        else:
            t_max = 2 * max(d.x, 1)
    t_max = rat(t_max)
    s_max = t_max / (d.x if d.x else d.y)
    Q = P.shifted(d.vector, s_max)
    parts = []
    panels_w = 0.0
    height = 0.0

    if mode in ("unfold", "both"):
        xmin, xmax = min(P.x, Q.x) - 1, max(P.x, Q.x) + 1
        ymin, ymax = min(P.y, Q.y) - mpq(1, 2), max(P.y, Q.y) + mpq(1, 2)
        box = (xmin, xmax, ymin, ymax)
        if layout is not None:
            box = layout.viewport
        scale = layout.scale if layout else 60.0
        styles = layout.styles if layout else CLASS_STYLE
        layers = layout.layers if layout else RenderSpec(box).layers
        c = _Canvas(*box, scale)
        parts.append('<g id="unfolding">')
        parts.append(f'<clipPath id="vp"><rect x="0" y="0" width="{c.width:.3f}" '
                     f'height="{c.height:.3f}"/></clipPath><g clip-path="url(#vp)">')
        if "tessellation" in layers:
            parts.extend(_tessellation_layer(c, shape, box, styles))
        if "fundamental" in layers:
            parts.append(_polyline(c, tess.polygon, "#000000", 1.6, closed=True))
        if "unfolding" in layers:
            parts.append(_polyline(c, (P, Q), "#ff7f0e", 1.8))
            tr = unfold_trace(tess, a, d, t_max)
            for e in tr.crossings:
                if e.is_vertex_hit:
                    parts.append(f'<circle cx="{c.pt(e.point).split(",")[0]}" '
                                 f'cy="{c.pt(e.point).split(",")[1]}" r="3" fill="#000000"/>')
        parts.append("</g></g>")
        panels_w = c.width
        height = c.height

    if mode in ("fold", "both"):
        xs = [q.x for q in tess.polygon]
        ys = [q.y for q in tess.polygon]
        pad = mpq(1, 10)
        ox = panels_w + (20 if panels_w else 0)
        c = _Canvas(min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad, 160.0, ox, 0.0)
        parts.append('<g id="fold">')
        parts.append(_polyline(c, tess.polygon, "#000000", 1.6, closed=True))
        launch = pull_back(tess, a, d)
        if launch is not None:
            res = fold_offset(tess, a, d, max_bounces=max(200, 4 * int(s_max * 40)))
            path = [launch[0]] + list(res.bounce_points)
            parts.append(_polyline(c, path, "#ff7f0e", 1.2))
            parts.append(f'<text x="{ox + 4:.3f}" y="14" font-size="12">'
                         f'{res.status.value} period={res.period}</text>')
        parts.append("</g>")
        panels_w = ox + c.width
        height = max(height, c.height)

    if d.x and shape is not ShapeId.HEXAGON and (layout is None or "contacts" in layout.layers):
        prof = contact_points(tess, a, d, 2 * d.x)
        top = height + 20
        w = 300.0
        barrier = tess.barrier

        def fx(v):
            return 10 + float(v) / 2 * w

        parts.append('<g id="fence">')
        parts.append(f'<line x1="{fx(0):.3f}" y1="{top:.3f}" x2="{fx(2):.3f}" y2="{top:.3f}" '
                     f'stroke="{GATE_COLOR}" stroke-width="4"/>')
        spans = [(barrier.lo, barrier.hi)] if not barrier.gate_swapped else [
            (0, barrier.lo), (barrier.hi, 2)]
        for lo, hi in spans:
            parts.append(f'<line x1="{fx(lo):.3f}" y1="{top:.3f}" x2="{fx(hi):.3f}" '
                         f'y2="{top:.3f}" stroke="{BARRIER_COLOR}" stroke-width="4"/>')
        for cval, mult in prof.points:
            color = BARRIER_COLOR if barrier.contains(cval) else GATE_COLOR
            parts.append(f'<line x1="{fx(cval):.3f}" y1="{top - 8 - 4 * mult:.3f}" '
                         f'x2="{fx(cval):.3f}" y2="{top + 8:.3f}" stroke="{color}" '
                         f'stroke-width="1.5"/>')
        parts.append(f'<text x="{fx(2) + 8:.3f}" y="{top + 4:.3f}" font-size="12">'
                     f'N={prof.N} b={prof.b}</text></g>')
        height = top + 20
        panels_w = max(panels_w, w + 80)

    head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<!-- obtuse-billiards {__version__} -->\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{panels_w:.0f}" height="{height + 4:.0f}">')
    return "\n".join([head, *parts, "</svg>"]) + "\n"
