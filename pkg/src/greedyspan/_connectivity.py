"""Internal t-connectivity checks for the greedy drivers.

The drivers need one predicate, evaluated millions of times on a growing
graph: does delta(u, v) <= t * |uv| hold right now?  The authoritative
evaluator is an A* search with the Euclidean heuristic (admissible and
consistent, since edge weights are Euclidean lengths), which settles exactly
the same distance values as plain Dijkstra while visiting only the ellipse
of candidate paths.  Three certified shortcuts sit in front of it:

* an existing edge (u, v) proves delta <= |uv| immediately;
* landmark distance maps give sound upper bounds d_m(u) + d_m(v) that only
  ever over-estimate (they may be stale after edge insertions, and stale
  values are still valid paths), so a bound at most t*|uv| certifies the
  predicate without a search;
* a geometrically monotone greedy walk toward the target produces a real
  path whose length bounds delta from above.

A certified True is always true; every False from a shortcut falls through
to the exact search, so the predicate value never differs from Dijkstra's.
"""

from __future__ import annotations

import math
from heapq import heappop, heappush

from .graph import SpannerGraph, dijkstra

__all__ = ["TPathOracle", "astar_network_distance"]

# relative slack on the pruning bound; overwhelms accumulated float noise on
# path sums while staying far below any meaningful distance difference
_PRUNE_SLACK = 1e-12


def greedy_walk_within(
    adjacency, xs: list, ys: list, u: int, v: int, budget: float
) -> float:
    """Length of a geometrically monotone u-v walk if one fits the budget.

    Each hop must strictly reduce the Euclidean distance to the target, so
    the walk cannot cycle; a dead end or a budget overrun returns math.inf.
    Any finite return is the length of a real path, hence a sound upper
    bound on the network distance.
    """
    vx, vy = xs[v], ys[v]
    x = u
    dxv = math.hypot(xs[u] - vx, ys[u] - vy)
    total = 0.0
    hyp = math.hypot
    hops = 512  # degenerate geometries could crawl; bail to the exact search
    while x != v:
        hops -= 1
        if hops < 0:
            return math.inf
        best_y = -1
        best_dyv = dxv
        best_w = 0.0
        for y, w in adjacency[x]:
            dyv = hyp(xs[y] - vx, ys[y] - vy)
            if dyv < best_dyv:
                best_dyv = dyv
                best_y = y
                best_w = w
        if best_y < 0:
            return math.inf
        total += best_w
        if total + best_dyv > budget:
            return math.inf
        x = best_y
        dxv = best_dyv
    return total


def astar_network_distance(
    adjacency, xs: list, ys: list, u: int, v: int, bound: float
) -> float:
    """Exact network distance delta(u, v) if it is <= bound, else math.inf.

    Distance accumulation is identical to Dijkstra's, so the returned value
    is bit-for-bit the shortest-path distance; the heuristic only reorders
    the exploration.
    """
    if u == v:
        return 0.0
    vx, vy = xs[v], ys[v]
    limit = bound * (1.0 + _PRUNE_SLACK)
    best = {u: 0.0}
    heap = [(math.hypot(xs[u] - vx, ys[u] - vy), 0.0, u)]
    push, pop, hyp = heappush, heappop, math.hypot
    while heap:
        f, d, x = pop(heap)
        if f > limit:
            return math.inf
        if x == v:
            return d if d <= bound else math.inf
        if d > best[x]:
            continue
        for y, w in adjacency[x]:
            nd = d + w
            by = best.get(y)
            if by is None or nd < by:
                best[y] = nd
                push(heap, (nd + hyp(xs[y] - vx, ys[y] - vy), nd, y))
    return math.inf


class TPathOracle:
    """Certified t-connectivity on a single growing SpannerGraph."""

    def __init__(self, g: SpannerGraph, t: float, *, use_landmarks: bool = True):
        self.g = g
        self.t = t
        self.version = 0  # bumped on every edge insertion
        n = len(g.points)
        self._n = n
        self._use_landmarks = use_landmarks and n >= 2048
        self._lm_matrix = None  # (n, K) float64 of landmark distances
        self._lm_gate = math.inf  # only consult landmarks for bounds >= gate
        self._lm_version = -1
        # reusable search state: distance array with visit stamps avoids a
        # fresh dict per query in the hot path
        self._dist = [math.inf] * n
        self._seen = [0] * n
        self._query = 0
        if self._use_landmarks:
            # the gate is known before any build: a landmark detour costs
            # about the spacing, and the slack it must fit into shrinks with
            # t - 1, so short checks go straight to the search
            x0, y0, x1, y1 = g.points.bounding_box()
            area = (x1 - x0) * (y1 - y0)
            k = max(16, min(256, n // 64))
            if area > 0.0:
                spacing = math.sqrt(area / k)
                self._lm_gate = (2.0 + 2.0 / (t - 1.0)) * spacing * t
            else:
                self._lm_gate = 0.0

    def notify_insert(self) -> None:
        self.version += 1

    # -- landmarks ---------------------------------------------------------

    def _build_landmarks(self) -> None:
        import numpy as np

        g = self.g
        pts = g.points
        n = self._n
        k_target = max(16, min(256, n // 64))
        side = int(math.ceil(math.sqrt(k_target)))
        x0, y0, x1, y1 = pts.bounding_box()
        w = (x1 - x0) or 1.0
        h = (y1 - y0) or 1.0
        # one landmark per occupied stratification cell: the point nearest
        # the cell centre, so selection is deterministic
        cell_best: dict[tuple[int, int], tuple[float, int]] = {}
        xs, ys = pts.xs, pts.ys
        for i in range(n):
            cx = min(int((xs[i] - x0) / w * side), side - 1)
            cy = min(int((ys[i] - y0) / h * side), side - 1)
            ccx = x0 + (cx + 0.5) * w / side
            ccy = y0 + (cy + 0.5) * h / side
            d = math.hypot(xs[i] - ccx, ys[i] - ccy)
            key = (cx, cy)
            cur = cell_best.get(key)
            if cur is None or (d, i) < cur:
                cell_best[key] = (d, i)
        chosen = sorted(i for _, i in cell_best.values())
        mat = np.full((n, len(chosen)), math.inf, dtype=np.float64)
        for col, s in enumerate(chosen):
            for node, dist in dijkstra(g, s).entries.items():
                mat[node, col] = dist
        self._lm_matrix = mat
        self._lm_version = self.version

    def _landmarks_ready(self, bound: float) -> bool:
        """Whether landmarks are worth consulting for this bound; builds the
        maps on first profitable use, never for short-range checks."""
        if not self._use_landmarks or bound < self._lm_gate:
            return False
        if self._lm_matrix is None:
            self._build_landmarks()
        return True

    def _maybe_refresh_landmarks(self) -> bool:
        """Rebuild stale landmark maps; returns True if rebuilt."""
        if self._lm_matrix is None:
            return False
        if self.version - self._lm_version > max(256, self._n // 8):
            self._build_landmarks()
            return True
        return False

    def landmark_upper_bound(self, u: int, v: int) -> float:
        """Sound upper bound on delta(u, v) from the landmark maps."""
        if self._lm_matrix is None:
            return math.inf
        m = self._lm_matrix
        return float((m[u] + m[v]).min())

    def bulk_upper_bound(self, a_ids, b_ids) -> float:
        """Upper bound valid for every cross pair of the two id lists."""
        if self._lm_matrix is None:
            return math.inf
        import numpy as np

        m = self._lm_matrix
        ua = m[a_ids].max(axis=0) if len(a_ids) > 1 else m[a_ids[0]]
        ub = m[b_ids].max(axis=0) if len(b_ids) > 1 else m[b_ids[0]]
        return float(np.min(ua + ub))

    # -- the predicate ------------------------------------------------------

    def connected(self, u: int, v: int) -> tuple[bool, float]:
        """(predicate value, upper bound on delta when True).

        The bound is exact when it came from the search, and a certified
        over-estimate when a shortcut fired.
        """
        g = self.g
        xs, ys = g.points.xs, g.points.ys
        w = math.hypot(xs[u] - xs[v], ys[u] - ys[v])
        bound = self.t * w
        key = (u, v) if u < v else (v, u)
        if key in g._edges:
            return True, w
        if self._landmarks_ready(bound):
            ub = self.landmark_upper_bound(u, v)
            if ub <= bound * (1.0 - _PRUNE_SLACK):
                return True, ub
        adj = g.adjacency
        budget = bound * (1.0 - _PRUNE_SLACK)
        walk = greedy_walk_within(adj, xs, ys, u, v, budget)
        if walk != math.inf:
            return True, walk
        walk = greedy_walk_within(adj, xs, ys, v, u, budget)
        if walk != math.inf:
            return True, walk
        d = self._astar(u, v, bound)
        return (d <= bound), d

    def _astar(self, u: int, v: int, bound: float) -> float:
        """Exact bounded network distance over reusable per-oracle arrays.

        Same accumulation as :func:`astar_network_distance`, with the
        tentative-distance dict replaced by stamped arrays.
        """
        if u == v:
            return 0.0
        g = self.g
        xs, ys = g.points.xs, g.points.ys
        adjacency = g.adjacency
        self._query += 1
        stamp = self._query
        dist = self._dist
        seen = self._seen
        vx, vy = xs[v], ys[v]
        limit = bound * (1.0 + _PRUNE_SLACK)
        dist[u] = 0.0
        seen[u] = stamp
        heap = [(math.hypot(xs[u] - vx, ys[u] - vy), 0.0, u)]
        push, pop, hyp = heappush, heappop, math.hypot
        while heap:
            f, d, x = pop(heap)
            if f > limit:
                return math.inf
            if x == v:
                return d if d <= bound else math.inf
            if d > dist[x]:
                continue
            for y, w in adjacency[x]:
                nd = d + w
                if seen[y] != stamp or nd < dist[y]:
                    seen[y] = stamp
                    dist[y] = nd
                    push(heap, (nd + hyp(xs[y] - vx, ys[y] - vy), nd, y))
        return math.inf
