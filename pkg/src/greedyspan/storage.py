"""Plain-text point and edge files.

Points: one "x y" pair per line at full round-trip precision.
Edges: one "i j" pair per line, zero-based ids, each undirected edge once.
"""

from __future__ import annotations

import os

from .geometry import PointSet
from .graph import SpannerGraph

__all__ = ["write_points", "read_points", "write_edge_list", "read_edge_list"]


def write_points(points: PointSet, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        for i in range(len(points)):
            fh.write(f"{points.xs[i]!r} {points.ys[i]!r}\n")


def read_points(path: str | os.PathLike) -> PointSet:
    coords = []
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}: malformed point line {ln}: {line!r}")
            coords.append((float(parts[0]), float(parts[1])))
    return PointSet(coords)


def write_edge_list(graph: SpannerGraph, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        for u, v, _ in graph.edges():
            fh.write(f"{u} {v}\n")


def read_edge_list(path: str | os.PathLike, points: PointSet) -> SpannerGraph:
    g = SpannerGraph(points)
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}: malformed edge line {ln}: {line!r}")
            g.add_edge(int(parts[0]), int(parts[1]))
    return g
