"""Fair split tree and well-separated pair decomposition.

The tree stores nodes in flat parallel arrays with contiguous point-id spans
over one permutation, so large decompositions stay compact; pair records are
kept in primitive arrays and materialised as :class:`WspdPair` on access.
Trees and pair lists are immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .geometry import Point, PointSet

__all__ = [
    "SplitTree",
    "TreeNode",
    "WspdPair",
    "Wspd",
    "build_split_tree",
    "build_wspd",
    "closest_pair_candidate",
    "is_well_separated",
]


def is_well_separated(
    bbox_a: tuple[float, float, float, float],
    bbox_b: tuple[float, float, float, float],
    sigma: float,
) -> bool:
    """Separation test on enclosing circles of the two rectangles.

    Circles share radius r = max circumradius; the sets are well separated
    when center_distance - 2r >= sigma * r, evaluated in squared form
    (center_distance^2 >= ((sigma + 2) r)^2) so construction and audits use
    identical arithmetic.
    """
    ax0, ay0, ax1, ay1 = bbox_a
    bx0, by0, bx1, by1 = bbox_b
    da2 = (ax1 - ax0) ** 2 + (ay1 - ay0) ** 2
    db2 = (bx1 - bx0) ** 2 + (by1 - by0) ** 2
    r2 = 0.25 * (da2 if da2 >= db2 else db2)
    cx = 0.5 * (ax0 + ax1) - 0.5 * (bx0 + bx1)
    cy = 0.5 * (ay0 + ay1) - 0.5 * (by0 + by1)
    return cx * cx + cy * cy >= (sigma + 2.0) * (sigma + 2.0) * r2


class SplitTree:
    """Fair split tree: each internal node splits its bounding rectangle at
    the midpoint of the longest side; node rectangles are shrunk to their
    points.  Leaves hold single points."""

    __slots__ = (
        "points", "order", "x0", "y0", "x1", "y1",
        "begin", "end", "left", "right", "leaf_id",
    )

    def __init__(self, points: PointSet):
        self.points = points
        self.order: list[int] = []
        # parallel node arrays; index 0 is the root
        self.x0 = array("d")
        self.y0 = array("d")
        self.x1 = array("d")
        self.y1 = array("d")
        self.begin = array("i")
        self.end = array("i")
        self.left = array("i")
        self.right = array("i")
        self.leaf_id = array("i")  # point id for leaves, -1 for internal nodes

    def __len__(self) -> int:
        return len(self.begin)

    @property
    def root(self) -> "TreeNode":
        return TreeNode(self, 0)

    def node(self, i: int) -> "TreeNode":
        if not 0 <= i < len(self.begin):
            raise IndexError(f"node index {i} out of range")
        return TreeNode(self, i)

    def node_point_ids(self, i: int) -> list[int]:
        return self.order[self.begin[i] : self.end[i]]

    def node_bbox(self, i: int) -> tuple[float, float, float, float]:
        return (self.x0[i], self.y0[i], self.x1[i], self.y1[i])


class TreeNode:
    """Lightweight view of a split-tree node."""

    __slots__ = ("tree", "index")

    def __init__(self, tree: SplitTree, index: int):
        self.tree = tree
        self.index = index

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        return self.tree.node_bbox(self.index)

    @property
    def point_ids(self) -> list[int]:
        return self.tree.node_point_ids(self.index)

    @property
    def size(self) -> int:
        t = self.tree
        return t.end[self.index] - t.begin[self.index]

    @property
    def is_leaf(self) -> bool:
        return self.tree.left[self.index] < 0

    @property
    def children(self) -> tuple["TreeNode", "TreeNode"] | tuple[()]:
        t = self.tree
        if t.left[self.index] < 0:
            return ()
        return (TreeNode(t, t.left[self.index]), TreeNode(t, t.right[self.index]))

    def circumradius(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return 0.5 * math.hypot(x1 - x0, y1 - y0)

    def __repr__(self) -> str:  # pragma: no cover
        return f"TreeNode(index={self.index}, size={self.size}, bbox={self.bbox})"


def build_split_tree(points: PointSet) -> SplitTree:
    """Build the fair split tree; deterministic for a fixed input order."""
    n = len(points)
    if n == 0:
        raise ValueError("cannot build a split tree over an empty point set")
    tree = SplitTree(points)
    tree.order = list(range(n))
    xs, ys = points.xs, points.ys
    order = tree.order
    tx0, ty0, tx1, ty1 = tree.x0, tree.y0, tree.x1, tree.y1
    tb, te, tl, tr, tleaf = tree.begin, tree.end, tree.left, tree.right, tree.leaf_id

    # each task creates one node for order[a:b]; parent slots are patched after
    stack: list[tuple[int, int, int, bool]] = [(0, n, -1, False)]
    while stack:
        a, b, parent, is_left = stack.pop()
        ids = order[a:b]
        x0 = y0 = math.inf
        x1 = y1 = -math.inf
        for i in ids:
            x, y = xs[i], ys[i]
            if x < x0:
                x0 = x
            if x > x1:
                x1 = x
            if y < y0:
                y0 = y
            if y > y1:
                y1 = y
        idx = len(tb)
        tx0.append(x0)
        ty0.append(y0)
        tx1.append(x1)
        ty1.append(y1)
        tb.append(a)
        te.append(b)
        tl.append(-1)
        tr.append(-1)
        tleaf.append(ids[0] if b - a == 1 else -1)
        if parent >= 0:
            if is_left:
                tl[parent] = idx
            else:
                tr[parent] = idx
        if b - a == 1:
            continue
        # fair split: midpoint of the longest side; degenerate spans fall
        # back to a positional split so construction always terminates
        if x1 - x0 >= y1 - y0:
            lo, hi, coords = x0, x1, xs
        else:
            lo, hi, coords = y0, y1, ys
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            half = (b - a) // 2
            left_ids, right_ids = ids[:half], ids[half:]
        else:
            left_ids = [i for i in ids if coords[i] <= mid]
            right_ids = [i for i in ids if coords[i] > mid]
            if not left_ids or not right_ids:
                half = (b - a) // 2
                left_ids, right_ids = ids[:half], ids[half:]
        order[a : a + len(left_ids)] = left_ids
        order[a + len(left_ids) : b] = right_ids
        m = a + len(left_ids)
        # push right first so the left child is created first (index order)
        stack.append((m, b, idx, False))
        stack.append((a, m, idx, True))
    return tree


@dataclass(frozen=True)
class WspdPair:
    """One well-separated pair {A, B} with rectangle distance bounds."""

    left: TreeNode
    right: TreeNode
    bbox_min_dist: float
    bbox_max_dist: float
    separation_ok: bool = True


class Wspd:
    """Sequence of well-separated pairs; records live in primitive arrays."""

    __slots__ = ("tree", "sigma", "lefts", "rights", "bmin", "bmax")

    def __init__(self, tree: SplitTree, sigma: float, lefts, rights, bmin, bmax):
        self.tree = tree
        self.sigma = sigma
        self.lefts = lefts
        self.rights = rights
        self.bmin = bmin
        self.bmax = bmax

    def __len__(self) -> int:
        return len(self.lefts)

    def __getitem__(self, k: int) -> WspdPair:
        if not 0 <= k < len(self.lefts):
            raise IndexError(f"pair index {k} out of range")
        return WspdPair(
            left=TreeNode(self.tree, self.lefts[k]),
            right=TreeNode(self.tree, self.rights[k]),
            bbox_min_dist=self.bmin[k],
            bbox_max_dist=self.bmax[k],
        )

    def __iter__(self) -> Iterator[WspdPair]:
        for k in range(len(self.lefts)):
            yield self[k]

    def bbox_min_array(self):
        import numpy as np

        return np.frombuffer(self.bmin, dtype=np.float64)


def build_wspd(tree: SplitTree, sigma: float) -> Wspd:
    """Decompose all point pairs into sigma-well-separated node pairs.

    Separation is decided by :func:`is_well_separated` on the node
    rectangles.  Every unordered point pair lands in exactly one emitted
    pair regardless of sigma.
    """
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise ValueError(f"sigma must be positive and finite, got {sigma!r}")
    x0, y0, x1, y1 = tree.x0, tree.y0, tree.x1, tree.y1
    tl, tr = tree.left, tree.right
    lefts = array("i")
    rights = array("i")
    bmin = array("d")
    bmax = array("d")
    n_nodes = len(tree)
    if n_nodes == 1 and tl[0] < 0:
        return Wspd(tree, sigma, lefts, rights, bmin, bmax)

    stack: list[tuple[int, int]] = []
    for i in range(n_nodes):
        if tl[i] >= 0:
            stack.append((tl[i], tr[i]))
    hyp = math.hypot
    sep2 = (sigma + 2.0) * (sigma + 2.0) * 0.25
    while stack:
        i, j = stack.pop()
        ax0, ay0, ax1, ay1 = x0[i], y0[i], x1[i], y1[i]
        bx0, by0, bx1, by1 = x0[j], y0[j], x1[j], y1[j]
        da2 = (ax1 - ax0) ** 2 + (ay1 - ay0) ** 2
        db2 = (bx1 - bx0) ** 2 + (by1 - by0) ** 2
        r2 = da2 if da2 >= db2 else db2
        cx = 0.5 * (ax0 + ax1) - 0.5 * (bx0 + bx1)
        cy = 0.5 * (ay0 + ay1) - 0.5 * (by0 + by1)
        if cx * cx + cy * cy >= sep2 * r2:
            dx = bx0 - ax1
            dx2 = ax0 - bx1
            if dx2 > dx:
                dx = dx2
            if dx < 0.0:
                dx = 0.0
            dy = by0 - ay1
            dy2 = ay0 - by1
            if dy2 > dy:
                dy = dy2
            if dy < 0.0:
                dy = 0.0
            lefts.append(i)
            rights.append(j)
            bmin.append(hyp(dx, dy))
            ex = bx1 - ax0
            ex2 = ax1 - bx0
            if ex2 > ex:
                ex = ex2
            ey = by1 - ay0
            ey2 = ay1 - by0
            if ey2 > ey:
                ey = ey2
            bmax.append(hyp(ex, ey))
        else:
            # split the node with the larger rectangle diagonal (ties: first)
            if tl[i] < 0 or (tl[j] >= 0 and db2 > da2):
                stack.append((i, tl[j]))
                stack.append((i, tr[j]))
            else:
                stack.append((tl[i], j))
                stack.append((tr[i], j))
    return Wspd(tree, sigma, lefts, rights, bmin, bmax)


def closest_pair_candidate(
    pair: WspdPair,
    points: PointSet,
    exclude: Optional[Callable[[int, int], bool]] = None,
) -> Optional[tuple[Point, Point, float]]:
    """Closest (u, v) with u in A, v in B and exclude(u, v) false.

    Brute force over the pair's point lists; ties break lexicographically by
    (u id, v id).  Returns None when every cross pair is excluded.
    """
    xs, ys = points.xs, points.ys
    best: Optional[tuple[float, int, int]] = None
    for u in pair.left.point_ids:
        ux, uy = xs[u], ys[u]
        for v in pair.right.point_ids:
            if exclude is not None and exclude(u, v):
                continue
            w = math.hypot(ux - xs[v], uy - ys[v])
            key = (w, u, v)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    w, u, v = best
    return (points[u], points[v], w)
