"""Deterministic SVG rendering of point sets and their spanners."""

from __future__ import annotations

from typing import Optional

from .geometry import PointSet
from .graph import SpannerGraph

__all__ = ["render_svg"]


def _fmt(v: float) -> str:
    return f"{v:.8g}"


def render_svg(
    points: PointSet,
    edges: Optional[SpannerGraph] = None,
    *,
    width: int = 800,
    margin: float = 0.02,
    point_radius: Optional[float] = None,
    stroke_width: Optional[float] = None,
    edge_color: str = "#1f77b4",
    point_color: str = "#d62728",
) -> str:
    """Vector image: edges as segments under points as dots.

    The viewport is the bounding box with a 2% margin; the y axis is flipped
    so the drawing matches mathematical orientation.  Output is a pure
    function of the inputs.
    """
    n = len(points)
    if n == 0:
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{width}" viewBox="0 0 1 1"></svg>'
        )
    x0, y0, x1, y1 = points.bounding_box()
    w = x1 - x0
    h = y1 - y0
    pad = margin * max(w, h, 1e-9)
    vx, vy = x0 - pad, y0 - pad
    vw, vh = w + 2 * pad, h + 2 * pad
    height = max(1, round(width * vh / vw))
    if point_radius is None:
        point_radius = 0.004 * max(vw, vh)
    if stroke_width is None:
        stroke_width = 0.0015 * max(vw, vh)

    def flip(y: float) -> float:
        return (y0 + y1) - y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_fmt(vx)} {_fmt(vy)} {_fmt(vw)} {_fmt(vh)}">'
    ]
    if edges is not None and edges.edge_count:
        parts.append(
            f'<g stroke="{edge_color}" stroke-width="{_fmt(stroke_width)}" '
            'stroke-linecap="round">'
        )
        xs, ys = points.xs, points.ys
        for u, v, _ in edges.edges():
            parts.append(
                f'<line x1="{_fmt(xs[u])}" y1="{_fmt(flip(ys[u]))}" '
                f'x2="{_fmt(xs[v])}" y2="{_fmt(flip(ys[v]))}"/>'
            )
        parts.append("</g>")
    parts.append(f'<g fill="{point_color}">')
    for i in range(n):
        parts.append(
            f'<circle cx="{_fmt(points.xs[i])}" cy="{_fmt(flip(points.ys[i]))}" '
            f'r="{_fmt(point_radius)}"/>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts)
