"""Uniform square bucketing of a point set with exact radius queries.

Grids are immutable after construction; concurrent read queries are safe.
"""

from __future__ import annotations

import math

from .geometry import Point, PointSet

__all__ = ["Grid", "build_grid", "points_within"]


class Grid:
    """Sparse uniform grid over a PointSet.

    A point (x, y) lives in cell (floor((x-ox)/cell), floor((y-oy)/cell)),
    with the last row/column clamped into the extent so the bounding-box
    maximum stays inside.  Cells are stored sparsely; clustered inputs would
    waste quadratic memory in a dense array.
    """

    __slots__ = ("points", "cell_size", "origin", "extent", "cells")

    def __init__(self, points: PointSet, cell_size: float, origin, extent, cells):
        self.points = points
        self.cell_size = cell_size
        self.origin = origin  # (min_x, min_y) of the bounding box
        self.extent = extent  # cell counts per axis
        self.cells = cells  # {(cx, cy): [point ids]}

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        cs = self.cell_size
        ox, oy = self.origin
        ex, ey = self.extent
        cx = int((x - ox) / cs)
        cy = int((y - oy) / cs)
        if cx < 0:
            cx = 0
        elif cx >= ex:
            cx = ex - 1
        if cy < 0:
            cy = 0
        elif cy >= ey:
            cy = ey - 1
        return cx, cy


def build_grid(points: PointSet, cell_size: float) -> Grid:
    """Bucket all points into cells of the given size."""
    if len(points) == 0:
        raise ValueError("cannot build a grid over an empty point set")
    if not (cell_size > 0.0 and math.isfinite(cell_size)):
        raise ValueError(f"cell_size must be positive and finite, got {cell_size!r}")
    x0, y0, x1, y1 = points.bounding_box()
    extent = (
        int((x1 - x0) / cell_size) + 1,
        int((y1 - y0) / cell_size) + 1,
    )
    cells: dict[tuple[int, int], list[int]] = {}
    xs, ys = points.xs, points.ys
    ex, ey = extent
    inv = 1.0 / cell_size
    for i in range(len(xs)):
        cx = int((xs[i] - x0) * inv)
        cy = int((ys[i] - y0) * inv)
        if cx >= ex:
            cx = ex - 1
        if cy >= ey:
            cy = ey - 1
        key = (cx, cy)
        bucket = cells.get(key)
        if bucket is None:
            cells[key] = [i]
        else:
            bucket.append(i)
    return Grid(points, float(cell_size), (x0, y0), extent, cells)


def points_within(grid: Grid, center: Point, radius: float) -> list[int]:
    """Ids of all points at Euclidean distance <= radius from center, sorted.

    Cells are scanned as a superset and filtered exactly, so the result is
    identical to a brute-force distance filter.
    """
    if radius < 0.0 or not math.isfinite(radius):
        raise ValueError(f"radius must be non-negative and finite, got {radius!r}")
    cs = grid.cell_size
    ox, oy = grid.origin
    ex, ey = grid.extent
    cx_lo = max(0, int(math.floor((center.x - radius - ox) / cs)))
    cx_hi = min(ex - 1, int(math.floor((center.x + radius - ox) / cs)))
    cy_lo = max(0, int(math.floor((center.y - radius - oy) / cs)))
    cy_hi = min(ey - 1, int(math.floor((center.y + radius - oy) / cs)))
    xs, ys = grid.points.xs, grid.points.ys
    cells = grid.cells
    px, py = center.x, center.y
    out: list[int] = []
    for cx in range(cx_lo, cx_hi + 1):
        for cy in range(cy_lo, cy_hi + 1):
            bucket = cells.get((cx, cy))
            if bucket is None:
                continue
            for i in bucket:
                if math.hypot(xs[i] - px, ys[i] - py) <= radius:
                    out.append(i)
    out.sort()
    return out
