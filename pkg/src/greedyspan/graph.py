"""Weighted Euclidean graphs with full, bounded and early-terminated Dijkstra."""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappop, heappush

from .geometry import PointSet, stretch_value
from .grid import Grid, points_within

__all__ = ["SpannerGraph", "DistanceMap", "dijkstra", "local_dijkstra", "has_t_path"]


class SpannerGraph:
    """Undirected graph over a PointSet, edges weighted with Euclidean length.

    Mutable only through :meth:`add_edge` (single writer); all traversals are
    read-only and may run concurrently between mutations.
    """

    __slots__ = ("points", "adjacency", "_edges")

    def __init__(self, points: PointSet):
        self.points = points
        self.adjacency: list[list[tuple[int, float]]] = [[] for _ in range(len(points))]
        self._edges: set[tuple[int, int]] = set()

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edges

    def add_edge(self, u: int, v: int) -> float:
        """Insert edge (u, v); returns its stored Euclidean length."""
        n = len(self.points)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge endpoint out of range: ({u}, {v})")
        if u == v:
            raise ValueError(f"self-loop rejected: ({u}, {v})")
        key = (u, v) if u < v else (v, u)
        if key in self._edges:
            raise ValueError(f"duplicate edge rejected: {key}")
        xs, ys = self.points.xs, self.points.ys
        w = math.hypot(xs[u] - xs[v], ys[u] - ys[v])
        self._edges.add(key)
        self.adjacency[u].append((v, w))
        self.adjacency[v].append((u, w))
        return w

    def edges(self) -> list[tuple[int, int, float]]:
        """All edges as (u, v, length) with u < v, sorted by (u, v)."""
        out = []
        xs, ys = self.points.xs, self.points.ys
        for u, v in sorted(self._edges):
            out.append((u, v, math.hypot(xs[u] - xs[v], ys[u] - ys[v])))
        return out

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._edges)

    def max_edge_length(self) -> float:
        """Length of the longest edge (0.0 for an edgeless graph)."""
        xs, ys = self.points.xs, self.points.ys
        best = 0.0
        for u, v in self._edges:
            w = math.hypot(xs[u] - xs[v], ys[u] - ys[v])
            if w > best:
                best = w
        return best


@dataclass(frozen=True)
class DistanceMap:
    """Sparse single-source network distances; only reached vertices appear."""

    source: int
    entries: dict[int, float]


def _check_id(g: SpannerGraph, s: int) -> None:
    if not 0 <= s < len(g.points):
        raise ValueError(f"point id {s} out of range [0, {len(g.points)})")


def dijkstra(g: SpannerGraph, s: int) -> DistanceMap:
    """Exact single-source shortest paths; unreachable vertices are absent.

    Heap ties on distance break by smaller point id for full determinism.
    """
    _check_id(g, s)
    adj = g.adjacency
    done: dict[int, float] = {}
    best: dict[int, float] = {s: 0.0}
    heap: list[tuple[float, int]] = [(0.0, s)]
    while heap:
        d, u = heappop(heap)
        if u in done:
            continue
        done[u] = d
        for v, w in adj[u]:
            if v in done:
                continue
            nd = d + w
            old = best.get(v)
            if old is None or nd < old:
                best[v] = nd
                heappush(heap, (nd, v))
    return DistanceMap(source=s, entries=done)


def local_dijkstra(
    g: SpannerGraph, grid: Grid, s: int, lam: float, t
) -> DistanceMap:
    """Dijkstra truncated to the radius-lambda*t neighbourhood of s.

    Only points at Euclidean distance <= lambda*t from s are ever enqueued,
    and only edges with both endpoints in that set are relaxed.  For every v
    with |sv| <= lambda the entry is the exact network distance whenever a
    t-path exists: such a path has length <= t*lambda and therefore never
    leaves the candidate disk.  Entries for other reached vertices are exact
    over the restricted vertex set.
    """
    _check_id(g, s)
    tv = stretch_value(t)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise ValueError(f"lambda must be positive and finite, got {lam!r}")
    allowed = set(points_within(grid, g.points[s], lam * tv))
    allowed.add(s)
    adj = g.adjacency
    done: dict[int, float] = {}
    best: dict[int, float] = {s: 0.0}
    heap: list[tuple[float, int]] = [(0.0, s)]
    while heap:
        d, u = heappop(heap)
        if u in done:
            continue
        done[u] = d
        for v, w in adj[u]:
            if v in done or v not in allowed:
                continue
            nd = d + w
            old = best.get(v)
            if old is None or nd < old:
                best[v] = nd
                heappush(heap, (nd, v))
    return DistanceMap(source=s, entries=done)


def has_t_path(g: SpannerGraph, u: int, v: int, t) -> bool:
    """Whether the network distance satisfies delta(u, v) <= t * |uv|.

    Dijkstra from u, terminated as soon as the frontier minimum exceeds the
    closed bound t*|uv| or v is settled.
    """
    _check_id(g, u)
    _check_id(g, v)
    if u == v:
        raise ValueError("has_t_path requires two distinct point ids")
    tv = stretch_value(t)
    xs, ys = g.points.xs, g.points.ys
    bound = tv * math.hypot(xs[u] - xs[v], ys[u] - ys[v])
    adj = g.adjacency
    done: set[int] = set()
    best: dict[int, float] = {u: 0.0}
    heap: list[tuple[float, int]] = [(0.0, u)]
    while heap:
        d, x = heappop(heap)
        if d > bound:
            return False
        if x == v:
            return True
        if x in done:
            continue
        done.add(x)
        for y, w in adj[x]:
            if y in done:
                continue
            nd = d + w
            old = best.get(y)
            if old is None or nd < old:
                best[y] = nd
                heappush(heap, (nd, y))
    return False
