"""Greedy spanner constructions: reference scan, WSPD driver, three phases.

All three algorithms produce the same edge set: pairs are examined in
ascending (length, min id, max id) order and an edge is inserted exactly
when the pair has no t-path yet.  They differ in how much work it takes to
discover that order and decide the t-path predicate:

* :func:`greedy_original` scans all point pairs, maintaining exact all-pairs
  network distances incrementally; the reference oracle for small inputs.
* :func:`wspd_greedy` drives candidates pair-by-pair out of a well-separated
  pair decomposition, checking the predicate on demand.
* :func:`greedy_bucketing` adds distribution sensitivity: a first phase
  finds all short edges with radius-bounded searches, a second phase proves
  most far pairs edge-free with hyperbola arc coverage, and a third phase
  runs the driver over whatever survives.
"""

from __future__ import annotations

import math
import time
from bisect import bisect_right
from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Mapping, Optional, Sequence

from ._connectivity import TPathOracle, astar_network_distance
from .coverage import TWO_PI, ArcSet, _interval_covered, box_discounted, build_coverage
from .geometry import PointSet, stretch_value
from .graph import DistanceMap, SpannerGraph, local_dijkstra
from .grid import Grid, build_grid
from .wspd import SplitTree, Wspd, WspdPair, build_split_tree, build_wspd

__all__ = [
    "GreedyConfig",
    "PhaseReport",
    "DiscountStats",
    "lambda_hat",
    "default_sigma",
    "effective_lambda",
    "greedy_original",
    "wspd_greedy",
    "greedy_short_edges",
    "discount_pairs",
    "greedy_bucketing",
]

_CERT_SLACK = 1e-12


def lambda_hat(n: int, t, log_base: float = math.e) -> float:
    """Empirical longest-edge scale: log n / ((t-1)^(1/4) * log log n).

    Logarithms are natural by default; the value is expressed in unit-density
    distance units (multiply by the point set's mean spacing for real data).
    """
    tv = stretch_value(t)
    m = max(int(n), 3)
    base = math.log(log_base)
    lg = math.log(m) / base
    llg = math.log(lg) / base if lg > 1.0 else 0.0
    llg = max(llg, 1e-2)
    return lg / ((tv - 1.0) ** 0.25 * llg)


def default_sigma(t) -> float:
    """Separation ratio under which a well-separated pair holds at most one
    greedy edge: once (u, v) in A x B is an edge, every other (x, y) is
    bridged by it, so t|xu| + |uv| + t|vy| <= t|xy| for all cross pairs."""
    tv = stretch_value(t)
    return 4.0 * (tv + 1.0) / (tv - 1.0)


@dataclass(frozen=True)
class GreedyConfig:
    """Knobs of the distribution-sensitive construction."""

    t: float
    lambda_factor: float = 1.1
    lambda_override: Optional[float] = None
    sigma: Optional[float] = None
    log_base: float = math.e

    def __post_init__(self) -> None:
        stretch_value(self.t)
        if not (self.lambda_factor > 0.0):
            raise ValueError("lambda_factor must be positive")
        if self.lambda_override is not None and not (self.lambda_override > 0.0):
            raise ValueError("lambda_override must be positive")
        if self.sigma is not None and not (self.sigma > 0.0):
            raise ValueError("sigma must be positive")


def effective_lambda(points: PointSet, cfg: GreedyConfig) -> float:
    """Locality radius for phase 1: override, or factor * lambda_hat scaled
    by the instance's mean spacing (unit-density instances scale by ~1)."""
    if cfg.lambda_override is not None:
        return cfg.lambda_override
    return cfg.lambda_factor * lambda_hat(len(points), cfg.t, cfg.log_base) * points.mean_spacing()


@dataclass
class PhaseReport:
    """Per-phase statistics of one bucketing run.

    ``points_discounted_fraction`` is the share of (pair, point) incidences
    over all phase-1-skipped pairs that phase 3 never has to touch: every
    incidence of a fully discounted pair plus the individually discounted
    points inside surviving pairs.
    """

    short_edges: int = 0
    pairs_total: int = 0
    pairs_skipped_phase1: int = 0
    pairs_discounted: int = 0
    points_discounted_fraction: float = 1.0
    phase3_edges: int = 0
    phase1_ms: float = 0.0
    phase2_ms: float = 0.0
    phase3_ms: float = 0.0


@dataclass
class DiscountStats:
    """Fragment of a PhaseReport produced by the discounting pass."""

    pairs_discounted: int = 0
    points_discounted_fraction: float = 1.0


# ---------------------------------------------------------------------------
# reference construction


def greedy_original(points: PointSet, t) -> SpannerGraph:
    """Scan all pairs in ascending (length, id) order, adding an edge exactly
    when the pair currently lacks a t-path.

    Network distances are maintained as an exact all-pairs matrix, updated
    incrementally per inserted edge, so the decision for every pair equals a
    fresh Dijkstra comparison.  Quadratic memory; intended for n up to ~2000.
    """
    import numpy as np

    tv = stretch_value(t)
    n = len(points)
    g = SpannerGraph(points)
    if n <= 1:
        return g
    arr = points.as_array()
    iu, iv = np.triu_indices(n, 1)
    w_all = np.hypot(arr[iu, 0] - arr[iv, 0], arr[iu, 1] - arr[iv, 1])
    order = np.lexsort((iv, iu, w_all))
    dmat = np.full((n, n), math.inf)
    np.fill_diagonal(dmat, 0.0)
    col = np.empty(n)
    t1 = np.empty((n, n))
    t2 = np.empty((n, n))
    chunk = 1 << 16
    for c0 in range(0, order.size, chunk):
        ks = order[c0 : c0 + chunk]
        for u, v, w in zip(iu[ks].tolist(), iv[ks].tolist(), w_all[ks].tolist()):
            if dmat[u, v] <= tv * w:
                continue
            g.add_edge(u, v)
            # exact incremental APSP: a shortest path uses the new edge at
            # most once, in one of its two directions
            np.add(dmat[:, u], w, out=col)
            np.add.outer(col, dmat[v, :], out=t1)
            np.add(dmat[:, v], w, out=col)
            np.add.outer(col, dmat[u, :], out=t2)
            np.minimum(t1, t2, out=t1)
            np.minimum(dmat, t1, out=dmat)
    return g


# ---------------------------------------------------------------------------
# the WSPD candidate driver


def _node_min_dist(tree: SplitTree, i: int, j: int) -> float:
    x0, y0, x1, y1 = tree.x0, tree.y0, tree.x1, tree.y1
    dx = max(x0[j] - x1[i], x0[i] - x1[j], 0.0)
    dy = max(y0[j] - y1[i], y0[i] - y1[j], 0.0)
    return math.hypot(dx, dy)


def _closest_cross(
    tree: SplitTree,
    na: int,
    nb: int,
    ex_a: Optional[frozenset],
    ex_b: Optional[frozenset],
) -> Optional[tuple[float, int, int]]:
    """Geometrically closest non-excluded cross pair of two tree nodes.

    Best-first search over node pairs ordered by rectangle distance; returns
    (length, min id, max id), the lexicographic minimum, or None when every
    cross pair is excluded.
    """
    xs, ys = tree.points.xs, tree.points.ys
    x0, y0, x1, y1 = tree.x0, tree.y0, tree.x1, tree.y1
    left, right, leaf = tree.left, tree.right, tree.leaf_id
    best: Optional[tuple[float, int, int]] = None
    heap: list[tuple[float, int, int]] = [(_node_min_dist(tree, na, nb), na, nb)]
    while heap:
        lb, i, j = heappop(heap)
        if best is not None and lb > best[0]:
            break
        li, lj = left[i], left[j]
        if li < 0 and lj < 0:
            u, v = leaf[i], leaf[j]
            if ex_a is not None and u in ex_a:
                continue
            if ex_b is not None and v in ex_b:
                continue
            w = math.hypot(xs[u] - xs[v], ys[u] - ys[v])
            cand = (w, u, v) if u < v else (w, v, u)
            if best is None or cand < best:
                best = cand
            continue
        # split the node with the larger rectangle diagonal (leaves cannot)
        if li < 0:
            split_j = True
        elif lj < 0:
            split_j = False
        else:
            split_j = math.hypot(x1[j] - x0[j], y1[j] - y0[j]) > math.hypot(
                x1[i] - x0[i], y1[i] - y0[i]
            )
        if split_j:
            heappush(heap, (_node_min_dist(tree, i, lj), i, lj))
            heappush(heap, (_node_min_dist(tree, i, right[j]), i, right[j]))
        else:
            heappush(heap, (_node_min_dist(tree, li, j), li, j))
            heappush(heap, (_node_min_dist(tree, right[i], j), right[i], j))
    return best


class _SentinelStream:
    """Pairs sorted by their rectangle distance lower bound, chunk-decoded."""

    def __init__(self, ws, ps, chunk: int = 1 << 18):
        self._ws = ws
        self._ps = ps
        self._chunk = chunk
        self._pos = 0
        self._buf_w: list[float] = []
        self._buf_p: list[int] = []
        self._buf_at = 0
        self._fill()

    def _fill(self) -> None:
        a = self._pos
        b = min(a + self._chunk, len(self._ws))
        self._buf_w = self._ws[a:b].tolist()
        self._buf_p = self._ps[a:b].tolist()
        self._buf_at = 0
        self._pos = b

    def peek(self) -> tuple[float, int]:
        if self._buf_at >= len(self._buf_w):
            if self._pos >= len(self._ws):
                return (math.inf, -1)
            self._fill()
            if not self._buf_w:
                return (math.inf, -1)
        return (self._buf_w[self._buf_at], self._buf_p[self._buf_at])

    def advance(self) -> None:
        self._buf_at += 1


@dataclass
class _DriverStats:
    edges_added: int = 0
    pops: int = 0


def _run_driver(
    points: PointSet,
    g: SpannerGraph,
    tree: SplitTree,
    wspd: Wspd,
    t: float,
    oracle: TPathOracle,
    *,
    cutoff: Optional[float] = None,
    pair_indices=None,
    excluded: Optional[Mapping[int, tuple[frozenset, frozenset]]] = None,
    discharge_after_edge: bool = True,
):
    """Run the candidate driver; returns (alive pair-index array, stats).

    Every pair enters a stream keyed by its rectangle distance (a lower bound
    on any of its candidates), is refined to its geometrically closest cross
    pair when that sentinel pops, and from then on walks its cross pairs in
    ascending order, skipping ones proven t-connected.  Pops are globally
    non-decreasing in (length, min id, max id), so the first failed t-path
    check is always the next greedy edge.  With ``cutoff`` the driver stops
    at the first candidate beyond it and reports every unfinished pair as
    alive.  ``discharge_after_edge`` drops a pair after its first inserted
    edge; valid whenever sigma >= 4(t+1)/(t-1).
    """
    import numpy as np

    stats = _DriverStats()
    npairs = len(wspd)
    dead = bytearray(npairs)
    if pair_indices is None:
        considered = None
        bmin_np = wspd.bbox_min_array()
        sort = np.argsort(bmin_np, kind="stable")
        stream = _SentinelStream(bmin_np[sort], sort)
    else:
        considered = np.asarray(pair_indices, dtype=np.int64)
        if considered.size == 0:
            return considered, stats
        bmin_np = wspd.bbox_min_array()[considered]
        sort = np.argsort(bmin_np, kind="stable")
        stream = _SentinelStream(bmin_np[sort], considered[sort])

    xs, ys = points.xs, points.ys
    lefts, rights = wspd.lefts, wspd.rights
    bmin = wspd.bmin
    begin, end, order = tree.begin, tree.end, tree.order
    tree_left, tree_leaf = tree.left, tree.leaf_id
    overlay: list[tuple[float, int, int, int, int]] = []  # (w, u, v, pair, ver)
    walks: dict[int, tuple[list[tuple[float, int, int]], int]] = {}
    connected = oracle.connected
    tslack = 1.0 - _CERT_SLACK

    def pair_sides(p: int) -> tuple[list[int], list[int]]:
        na, nb = lefts[p], rights[p]
        return order[begin[na] : end[na]], order[begin[nb] : end[nb]]

    def cert_discharged(p: int, cu: int, cv: int, duv: float) -> bool:
        """Prove every remaining cross pair of p t-connected, without
        enumerating them.  Sound regardless of the separation ratio."""
        a_ids, b_ids = pair_sides(p)
        ka, kb = len(a_ids), len(b_ids)
        if ka * kb == 1:
            return True  # the single cross pair was just consumed
        budget = t * bmin[p] * tslack
        # landmark route: max-over-side upper bounds hold for every cross pair
        if oracle._landmarks_ready(budget):
            if oracle.bulk_upper_bound(a_ids, b_ids) <= budget:
                return True
            if oracle._maybe_refresh_landmarks():
                if oracle.bulk_upper_bound(a_ids, b_ids) <= budget:
                    return True
        # candidate route: delta(x, y) <= t|x cu'| + delta(cu', cv') + t|cv' y|
        if math.isfinite(duv):  # have an upper bound for (cu, cv)
            if cu in a_ids:
                ua, vb = cu, cv
            else:
                ua, vb = cv, cu
            uax, uay = xs[ua], ys[ua]
            ma = max(math.hypot(xs[x] - uax, ys[x] - uay) for x in a_ids)
            vbx, vby = xs[vb], ys[vb]
            mb = max(math.hypot(xs[y] - vbx, ys[y] - vby) for y in b_ids)
            need = budget - t * ma - t * mb
            if duv > need:
                # the cheap upper bound may be too loose; one exact search
                # beats enumerating the pair's cross pairs
                duv = astar_network_distance(g.adjacency, xs, ys, cu, cv, need)
            if duv <= need:
                ok = all(x == ua or connected(x, ua)[0] for x in a_ids)
                if ok and all(y == vb or connected(y, vb)[0] for y in b_ids):
                    return True
        return False

    def build_walk(p: int, cu: int, cv: int, cw: float) -> None:
        a_ids, b_ids = pair_sides(p)
        exc = excluded.get(p) if excluded else None
        entries: list[tuple[float, int, int]] = []
        app = entries.append
        for u in a_ids:
            if exc and u in exc[0]:
                continue
            ux, uy = xs[u], ys[u]
            for v in b_ids:
                if exc and v in exc[1]:
                    continue
                w = math.hypot(ux - xs[v], uy - ys[v])
                app((w, u, v) if u < v else (w, v, u))
        entries.sort()
        walks[p] = (entries, bisect_right(entries, (cw, cu, cv)))

    def advance(p: int, cu: int, cv: int, cw: float, duv: float):
        """Next queue entry for pair p after consuming (cw, cu, cv)."""
        if p not in walks:
            if cert_discharged(p, cu, cv, duv):
                return None
            build_walk(p, cu, cv, cw)
        entries, at = walks[p]
        while at < len(entries):
            e = entries[at]
            at += 1
            if cutoff is not None and e[0] > cutoff:
                walks[p] = (entries, at)
                return (e[0], e[1], e[2], p, -1)
            ok, _ = connected(e[1], e[2])
            if not ok:
                walks[p] = (entries, at)
                return (e[0], e[1], e[2], p, oracle.version)
        del walks[p]
        return None

    while True:
        sw, sp = stream.peek()
        if overlay and overlay[0][0] < sw:
            w, u, v, p, ver = heappop(overlay)
            sentinel = False
        elif sp >= 0:
            stream.advance()
            w, p = sw, sp
            sentinel = True
        else:
            break
        if cutoff is not None and w > cutoff:
            break
        stats.pops += 1
        if sentinel:
            na, nb = lefts[p], rights[p]
            exc = excluded.get(p) if excluded else None
            if exc is None and tree_left[na] < 0 and tree_left[nb] < 0:
                # leaf-leaf pair: the rectangle distance IS the pair length
                u, v = tree_leaf[na], tree_leaf[nb]
                if u > v:
                    u, v = v, u
                heappush(overlay, (w, u, v, p, -1))
                continue
            cand = _closest_cross(
                tree, na, nb, exc[0] if exc else None, exc[1] if exc else None
            )
            if cand is None:
                dead[p] = 1
            else:
                heappush(overlay, (cand[0], cand[1], cand[2], p, -1))
            continue
        if ver == oracle.version:
            ok, duv = False, math.inf  # verified not connected at this version
        else:
            ok, duv = connected(u, v)
        if not ok:
            g.add_edge(u, v)
            oracle.notify_insert()
            stats.edges_added += 1
            if discharge_after_edge:
                dead[p] = 1
                walks.pop(p, None)
                continue
            duv = w  # the pair's candidate is now an edge
        nxt = advance(p, u, v, w, duv)
        if nxt is None:
            dead[p] = 1
        else:
            heappush(overlay, nxt)

    dead_np = np.frombuffer(bytes(dead), dtype=np.uint8)
    if considered is None:
        alive = np.flatnonzero(dead_np == 0)
    else:
        alive = considered[dead_np[considered] == 0]
    return alive, stats


def _discharge_default(wspd: Wspd, t: float) -> bool:
    return wspd.sigma >= default_sigma(t) - 1e-9


def _bounded_map(g: SpannerGraph, grid: Grid, s: int, lam: float, t: float) -> DistanceMap:
    """local_dijkstra with the candidate-disk test inlined per relaxation.

    Produces the identical map (membership in the disk of radius lam*t is
    decided by the same closed comparison) without materialising the
    candidate id set; used by the per-point coverage sweep.
    """
    from heapq import heappop, heappush

    xs, ys = g.points.xs, g.points.ys
    sx, sy = xs[s], ys[s]
    radius = lam * t
    adj = g.adjacency
    done: dict[int, float] = {}
    best: dict[int, float] = {s: 0.0}
    heap = [(0.0, s)]
    hyp = math.hypot
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
            if (old is None or nd < old) and hyp(xs[v] - sx, ys[v] - sy) <= radius:
                best[v] = nd
                heappush(heap, (nd, v))
    return DistanceMap(source=s, entries=done)


# ---------------------------------------------------------------------------
# public constructions


def wspd_greedy(points: PointSet, t, sigma: Optional[float] = None) -> SpannerGraph:
    """WSPD-driven greedy construction; equals greedy_original exactly."""
    tv = stretch_value(t)
    g = SpannerGraph(points)
    if len(points) <= 1:
        return g
    tree = build_split_tree(points)
    wspd = build_wspd(tree, sigma if sigma is not None else default_sigma(tv))
    oracle = TPathOracle(g, tv, use_landmarks=True)
    _run_driver(
        points, g, tree, wspd, tv, oracle,
        discharge_after_edge=_discharge_default(wspd, tv),
    )
    return g


def greedy_short_edges(
    points: PointSet,
    t,
    lam: float,
    grid: Grid,
    *,
    sigma: Optional[float] = None,
):
    """Phase 1: all greedy edges of length <= lam via the bounded driver.

    Returns (graph, skipped well-separated pairs, per-point distance maps
    from a final radius-lam local Dijkstra sweep over the produced graph).
    On a lam-bridged point set the graph holds every greedy edge.
    """
    tv = stretch_value(t)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise ValueError(f"lambda must be positive and finite, got {lam!r}")
    g = SpannerGraph(points)
    n = len(points)
    if n <= 1:
        return g, [], {i: DistanceMap(i, {i: 0.0}) for i in range(n)}
    tree = build_split_tree(points)
    wspd = build_wspd(tree, sigma if sigma is not None else default_sigma(tv))
    oracle = TPathOracle(g, tv, use_landmarks=False)
    alive, _ = _run_driver(
        points, g, tree, wspd, tv, oracle,
        cutoff=lam, discharge_after_edge=_discharge_default(wspd, tv),
    )
    skipped = [wspd[int(p)] for p in alive]
    maps = {s: local_dijkstra(g, grid, s, lam, tv) for s in range(n)}
    return g, skipped, maps


def _near_pair_discount(
    a_ids: Sequence[int],
    b_ids: Sequence[int],
    certified: Mapping[int, list],
    coverages,
    lam: float,
    points: PointSet,
):
    """Discount audit for pairs whose rectangles sit closer than lam.

    Each cross pair is certified individually: within the radius by the
    phase-1 map (a retained certified-partner list decides t-connectivity
    exactly), beyond it by arc containment of the target's direction from
    either endpoint (the point special case of the rectangle test, sound by
    ray monotonicity).  Returns (fully_discounted, discounted A ids,
    discounted B ids), mirroring the rectangle-based audit.
    """
    from bisect import bisect_left

    xs, ys = points.xs, points.ys
    ok_a = {u: True for u in a_ids}
    ok_b = {v: True for v in b_ids}
    for u in a_ids:
        ux, uy = xs[u], ys[u]
        cert_u = certified.get(u, ())
        arcs_u = coverages[u].arcs if coverages[u] is not None else ()
        for v in b_ids:
            d = math.hypot(xs[v] - ux, ys[v] - uy)
            if d <= lam:
                k = bisect_left(cert_u, v)
                passed = k < len(cert_u) and cert_u[k] == v
            else:
                theta = math.atan2(ys[v] - uy, xs[v] - ux) % TWO_PI
                passed = _interval_covered(arcs_u, theta, theta)
                if not passed:
                    arcs_v = coverages[v].arcs if coverages[v] is not None else ()
                    theta_back = math.atan2(uy - ys[v], ux - xs[v]) % TWO_PI
                    passed = _interval_covered(arcs_v, theta_back, theta_back)
            if not passed:
                ok_a[u] = False
                ok_b[v] = False
    disc_a = frozenset(u for u, ok in ok_a.items() if ok)
    disc_b = frozenset(v for v, ok in ok_b.items() if ok)
    full = len(disc_a) == len(a_ids) and len(disc_b) == len(b_ids)
    return full, disc_a, disc_b


def _discount_pair(
    a_ids: Sequence[int],
    b_ids: Sequence[int],
    box_a: tuple[float, float, float, float],
    box_b: tuple[float, float, float, float],
    coverages,
    lam: float,
    points: PointSet,
):
    """(fully_discounted, discounted A ids, discounted B ids)."""
    disc_a = [
        u
        for u in a_ids
        if coverages[u] is not None
        and box_discounted(u, coverages[u], box_b, lam, points)
    ]
    if len(disc_a) == len(a_ids):
        return True, frozenset(disc_a), frozenset()
    disc_b = [
        v
        for v in b_ids
        if coverages[v] is not None
        and box_discounted(v, coverages[v], box_a, lam, points)
    ]
    return len(disc_b) == len(b_ids), frozenset(disc_a), frozenset(disc_b)


def discount_pairs(
    skipped: Sequence[WspdPair],
    coverages,
    lam: float,
):
    """Phase 2: drop pairs whose opposite rectangles are fully covered.

    ``coverages`` maps point id to its ArcSet.  Returns the discounted pairs,
    a dict position-in-``skipped`` -> (discounted A ids, discounted B ids)
    for the pairs that survive, and the counting fragment for the report.
    """
    discounted: list[WspdPair] = []
    survivors: dict[int, tuple[frozenset, frozenset]] = {}
    pts_total = 0
    pts_disc = 0
    for k, pair in enumerate(skipped):
        points = pair.left.tree.points
        a_ids, b_ids = pair.left.point_ids, pair.right.point_ids
        incidences = len(a_ids) + len(b_ids)
        pts_total += incidences
        full, disc_a, disc_b = _discount_pair(
            a_ids, b_ids, pair.left.bbox, pair.right.bbox, coverages, lam, points
        )
        if full:
            discounted.append(pair)
            pts_disc += incidences
            continue
        survivors[k] = (disc_a, disc_b)
        pts_disc += len(disc_a) + len(disc_b)
    frac = 1.0 if pts_total == 0 else pts_disc / pts_total
    return discounted, survivors, DiscountStats(len(discounted), frac)


def greedy_bucketing(points: PointSet, cfg: GreedyConfig):
    """The full distribution-sensitive construction.

    Phase 1 collects edges up to the locality radius with bounded searches;
    phase 2 builds arc coverage per point and discounts far pairs; phase 3
    finishes the surviving pairs with unbounded checks.  The edge set equals
    greedy_original on every input; the phases only shift work.
    """
    tv = stretch_value(cfg.t)
    g = SpannerGraph(points)
    n = len(points)
    report = PhaseReport()
    if n <= 1:
        return g, report
    lam = effective_lambda(points, cfg)
    sigma = cfg.sigma if cfg.sigma is not None else default_sigma(tv)

    t0 = time.perf_counter()
    grid = build_grid(points, lam)
    tree = build_split_tree(points)
    wspd = build_wspd(tree, sigma)
    oracle = TPathOracle(g, tv, use_landmarks=False)
    discharge = _discharge_default(wspd, tv)
    alive, _ = _run_driver(
        points, g, tree, wspd, tv, oracle, cutoff=lam, discharge_after_edge=discharge
    )
    report.short_edges = g.edge_count
    report.pairs_total = len(wspd)
    report.pairs_skipped_phase1 = int(alive.size)
    report.phase1_ms = (time.perf_counter() - t0) * 1e3

    t1 = time.perf_counter()
    import numpy as np

    kept: list[int] = []
    excluded: dict[int, tuple[frozenset, frozenset]] = {}
    begin, end, order = tree.begin, tree.end, tree.order
    pts_total = 0
    pts_disc = 0
    n_disc = 0
    chunk = 1 << 18
    near_points: set[int] = set()
    if alive.size:
        tb = np.frombuffer(tree.begin, dtype=np.intc)
        te = np.frombuffer(tree.end, dtype=np.intc)
        order_np = np.asarray(order, dtype=np.intc)
        na_all = np.frombuffer(wspd.lefts, dtype=np.intc)[alive]
        nb_all = np.frombuffer(wspd.rights, dtype=np.intc)[alive]
        single = (te[na_all] - tb[na_all] == 1) & (te[nb_all] - tb[nb_all] == 1)
        bmin_alive = wspd.bbox_min_array()[alive]
        arr = points.as_array()
        # pairs closer than the radius need per-subpair certificates; note
        # their member points so the sweep retains certified-partner lists
        for k in np.flatnonzero(~single & (bmin_alive < lam)).tolist():
            for node in (int(na_all[k]), int(nb_all[k])):
                near_points.update(order[begin[node] : end[node]])

    certified: dict[int, list] = {}
    xs_l, ys_l = points.xs, points.ys
    coverages: list[ArcSet] = []
    for s in range(n):
        dm = _bounded_map(g, grid, s, lam, tv)
        coverages.append(build_coverage(s, dm, tv, lam, points))
        if s in near_points:
            sx, sy = xs_l[s], ys_l[s]
            certified[s] = sorted(
                v
                for v, dd in dm.entries.items()
                if v != s and dd <= tv * math.hypot(xs_l[v] - sx, ys_l[v] - sy)
            )
    if alive.size:

        # singleton pairs: the opposite rectangle degenerates to one point,
        # so the angular test is containment of a single direction, and a
        # rectangle distance below the radius can never discount anything
        s_sel = np.flatnonzero(single)
        if s_sel.size:
            pts_total += 2 * int(s_sel.size)
            far = bmin_alive[s_sel] >= lam
            kept.extend(alive[s_sel[~far]].tolist())
            far_sel = s_sel[far]
            fp = alive[far_sel]
            fu = order_np[tb[na_all[far_sel]]]
            fv = order_np[tb[nb_all[far_sel]]]
            ux, uy = arr[fu, 0], arr[fu, 1]
            vx, vy = arr[fv, 0], arr[fv, 1]
            th_uv = np.arctan2(vy - uy, vx - ux) % TWO_PI
            th_vu = np.arctan2(uy - vy, ux - vx) % TWO_PI
            # coverages are a single merged arc for almost every point, so
            # containment vectorises; multi-arc points fall back below
            arc_n = np.empty(n, dtype=np.int32)
            arc_lo = np.empty(n, dtype=np.float64)
            arc_hi = np.empty(n, dtype=np.float64)
            for i, c in enumerate(coverages):
                a = c.arcs
                arc_n[i] = len(a)
                if len(a) == 1:
                    arc_lo[i], arc_hi[i] = a[0]
                else:
                    arc_lo[i], arc_hi[i] = 1.0, 0.0
            nu, nv = arc_n[fu], arc_n[fv]
            cov_u = (nu == 1) & (arc_lo[fu] <= th_uv) & (th_uv <= arc_hi[fu])
            cov_v = (nv == 1) & (arc_lo[fv] <= th_vu) & (th_vu <= arc_hi[fv])
            disc_vec = cov_u | cov_v
            known = disc_vec | ((nu <= 1) & (nv <= 1))
            cnt = int(disc_vec.sum())
            n_disc += cnt
            pts_disc += 2 * cnt
            kept.extend(fp[known & ~disc_vec].tolist())
            rest = np.flatnonzero(~known)
            for a0 in range(0, int(rest.size), chunk):
                sel = rest[a0 : a0 + chunk]
                for p, u, v, tuv, tvu in zip(
                    fp[sel].tolist(),
                    fu[sel].tolist(),
                    fv[sel].tolist(),
                    th_uv[sel].tolist(),
                    th_vu[sel].tolist(),
                ):
                    if _interval_covered(coverages[u].arcs, tuv, tuv) or _interval_covered(
                        coverages[v].arcs, tvu, tvu
                    ):
                        n_disc += 1
                        pts_disc += 2
                    else:
                        kept.append(p)

        g_sel = np.flatnonzero(~single)
        g_near = bmin_alive[g_sel] < lam
        for a0 in range(0, int(g_sel.size), chunk):
            sel = g_sel[a0 : a0 + chunk]
            for p, near in zip(alive[sel].tolist(), g_near[a0 : a0 + chunk].tolist()):
                na, nb = wspd.lefts[p], wspd.rights[p]
                a_ids = order[begin[na] : end[na]]
                b_ids = order[begin[nb] : end[nb]]
                incidences = len(a_ids) + len(b_ids)
                pts_total += incidences
                if near:
                    full, disc_a, disc_b = _near_pair_discount(
                        a_ids, b_ids, certified, coverages, lam, points
                    )
                else:
                    full, disc_a, disc_b = _discount_pair(
                        a_ids, b_ids, tree.node_bbox(na), tree.node_bbox(nb),
                        coverages, lam, points,
                    )
                if full:
                    n_disc += 1
                    pts_disc += incidences
                    continue
                kept.append(p)
                if disc_a or disc_b:
                    excluded[p] = (disc_a, disc_b)
                pts_disc += len(disc_a) + len(disc_b)
        kept.sort()
    report.pairs_discounted = n_disc
    report.points_discounted_fraction = 1.0 if pts_total == 0 else pts_disc / pts_total
    report.phase2_ms = (time.perf_counter() - t1) * 1e3

    t2 = time.perf_counter()
    if kept:
        oracle3 = TPathOracle(g, tv, use_landmarks=True)
        _, stats3 = _run_driver(
            points, g, tree, wspd, tv, oracle3,
            pair_indices=kept, excluded=excluded, discharge_after_edge=discharge,
        )
        report.phase3_edges = stats3.edges_added
    report.phase3_ms = (time.perf_counter() - t2) * 1e3
    return g, report
