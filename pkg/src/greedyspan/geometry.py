"""Planar points and the exact geometric predicates behind greedy spanners.

All predicates use closed (<=) comparisons in plain double precision; no
epsilon enters predicate semantics, so the brute-force and the fast code
paths agree bit for bit on the same inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Point",
    "PointSet",
    "StretchFactor",
    "stretch_value",
    "dist",
    "bridges",
    "ellipse_contains",
    "is_mandatory",
    "coordinate_duplicates",
]


@dataclass(frozen=True, slots=True)
class Point:
    """A planar point; ``id`` is its position in the owning PointSet."""

    x: float
    y: float
    id: int = -1


@dataclass(frozen=True, slots=True)
class StretchFactor:
    """Intended dilation t of a spanner; must exceed 1."""

    t: float

    def __post_init__(self) -> None:
        if not (isinstance(self.t, (int, float)) and math.isfinite(self.t) and self.t > 1.0):
            raise ValueError(f"stretch factor must be a finite number > 1, got {self.t!r}")


def stretch_value(t: "StretchFactor | float") -> float:
    """Coerce a stretch factor (wrapper or plain number) to a validated float."""
    if isinstance(t, StretchFactor):
        return float(t.t)
    tv = float(t)
    if not (math.isfinite(tv) and tv > 1.0):
        raise ValueError(f"stretch factor must be a finite number > 1, got {t!r}")
    return tv


class PointSet:
    """Immutable indexed set of planar points.

    Points are identified by their insertion index; duplicate coordinates are
    permitted (see :func:`coordinate_duplicates`) and algorithms break ties by
    id, never by coordinates.
    """

    __slots__ = ("xs", "ys", "_array")

    def __init__(self, coords: Iterable[tuple[float, float] | Sequence[float]]):
        xs: list[float] = []
        ys: list[float] = []
        for pt in coords:
            x, y = float(pt[0]), float(pt[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError(f"non-finite coordinate at index {len(xs)}: ({x}, {y})")
            xs.append(x)
            ys.append(y)
        self.xs = xs
        self.ys = ys
        self._array = None

    def __len__(self) -> int:
        return len(self.xs)

    def __getitem__(self, i: int) -> Point:
        if not 0 <= i < len(self.xs):
            raise IndexError(f"point id {i} out of range [0, {len(self.xs)})")
        return Point(self.xs[i], self.ys[i], i)

    def __iter__(self) -> Iterator[Point]:
        for i in range(len(self.xs)):
            yield Point(self.xs[i], self.ys[i], i)

    def as_array(self):
        """Coordinates as an (n, 2) numpy array (cached)."""
        if self._array is None:
            import numpy as np

            arr = np.empty((len(self.xs), 2), dtype=np.float64)
            arr[:, 0] = self.xs
            arr[:, 1] = self.ys
            self._array = arr
        return self._array

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y); raises on an empty set."""
        if not self.xs:
            raise ValueError("bounding box of an empty point set")
        return (min(self.xs), min(self.ys), max(self.xs), max(self.ys))

    def mean_spacing(self) -> float:
        """Square root of bounding-box area per point; a density unit.

        Degenerate (collinear) boxes fall back to diagonal / n, a single
        point to 1.0.  Used to express locality radii in density units.
        """
        n = len(self.xs)
        if n == 0:
            raise ValueError("mean spacing of an empty point set")
        x0, y0, x1, y1 = self.bounding_box()
        area = (x1 - x0) * (y1 - y0)
        if area > 0.0:
            return math.sqrt(area / n)
        diag = math.hypot(x1 - x0, y1 - y0)
        return diag / n if diag > 0.0 else 1.0


def dist(u: Point, v: Point) -> float:
    """Euclidean distance |uv|."""
    return math.hypot(u.x - v.x, u.y - v.y)


def _require_distinct(*pts: Point) -> None:
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i].x == pts[j].x and pts[i].y == pts[j].y:
                raise ValueError(
                    f"coincident input points: ({pts[i].x}, {pts[i].y}) appears twice"
                )


def bridges(a: Point, b: Point, p: Point, q: Point, t: "StretchFactor | float") -> bool:
    """Whether (p, q) bridges (a, b): t|ap| + |pq| + t|qb| <= t|ab|.

    A bridging pair guarantees a t-path for (a, b) once (p, q) is an edge and
    (a, p), (q, b) already have t-paths.  Inputs must be pairwise distinct.
    """
    tv = stretch_value(t)
    _require_distinct(a, b, p, q)
    return tv * dist(a, p) + dist(p, q) + tv * dist(q, b) <= tv * dist(a, b)


def ellipse_contains(p: Point, q: Point, t: "StretchFactor | float", x: Point) -> bool:
    """Whether x lies in the closed ellipse with foci p, q and major sum t|pq|."""
    tv = stretch_value(t)
    if p.x == q.x and p.y == q.y:
        raise ValueError("ellipse requires two distinct foci")
    return dist(p, x) + dist(x, q) <= tv * dist(p, q)


def is_mandatory(
    p: Point, q: Point, points: PointSet, t: "StretchFactor | float"
) -> bool:
    """Whether the ellipse around (p, q) is empty of other points of the set.

    A mandatory pair is an edge of every t-spanner on ``points``: any t-path
    between p and q must stay inside the ellipse, which contains no
    intermediate point.
    """
    tv = stretch_value(t)
    for pt, name in ((p, "p"), (q, "q")):
        if not (0 <= pt.id < len(points)):
            raise ValueError(f"{name} (id {pt.id}) is not a member of the point set")
        if points.xs[pt.id] != pt.x or points.ys[pt.id] != pt.y:
            raise ValueError(f"{name} (id {pt.id}) does not match the point set")
    if p.id == q.id:
        raise ValueError("is_mandatory requires two distinct points")
    xs, ys = points.xs, points.ys
    px, py, qx, qy = p.x, p.y, q.x, q.y
    budget = tv * math.hypot(px - qx, py - qy)
    skip_p, skip_q = p.id, q.id
    for i in range(len(xs)):
        if i == skip_p or i == skip_q:
            continue
        x, y = xs[i], ys[i]
        if math.hypot(x - px, y - py) + math.hypot(x - qx, y - qy) <= budget:
            return False
    return True


def coordinate_duplicates(points: PointSet) -> list[tuple[int, int]]:
    """Validation pass: (i, j) id pairs with identical coordinates, i < j.

    Duplicates are legal (TSPLIB files contain them) but degrade the locality
    arguments; generators never produce them.
    """
    seen: dict[tuple[float, float], int] = {}
    dups: list[tuple[int, int]] = []
    for i in range(len(points)):
        key = (points.xs[i], points.ys[i])
        if key in seen:
            dups.append((seen[key], i))
        else:
            seen[key] = i
    return dups
