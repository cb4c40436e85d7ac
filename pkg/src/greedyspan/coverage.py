"""Path-hyperbola regions realised as arc coverage of a circle.

A path hyperbola PH(u, v) = { a : delta(u, v) + t*|va| <= t*|ua| } collects
the points that are guaranteed a t-path from u through v.  Membership along
any ray from u is monotone outward (t*r - t*|v x(r)| is non-decreasing in r),
so covering the whole region beyond radius lambda is equivalent to covering
the lambda-circle, and the union of hyperbolas reduces to a one-dimensional
union of angular intervals.  Arc endpoints are conservatively shrunk so the
structure never over-claims coverage; false negatives only cause harmless
fallback work.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

from .geometry import PointSet, stretch_value
from .graph import DistanceMap

__all__ = [
    "PathHyperbola",
    "ArcSet",
    "TWO_PI",
    "ARC_SHRINK",
    "hyperbola_arc",
    "merge_arcs",
    "build_coverage",
    "is_fully_covered",
    "box_discounted",
]

TWO_PI = 2.0 * math.pi

# conservative angular shrink applied at every arc endpoint
ARC_SHRINK = 1e-9
# near-tangent solutions cannot be certified in floating point
_TANGENT_EPS = 1e-12


@dataclass(frozen=True)
class PathHyperbola:
    """Region of points with a certified t-path from ``origin`` via ``focus``.

    ``delta`` is the network distance between origin and focus; it is never
    below their Euclidean distance.
    """

    origin: int
    focus: int
    delta: float
    t: float


@dataclass(frozen=True)
class ArcSet:
    """Sorted, disjoint angular intervals on the radius-``radius`` circle.

    Intervals live in [0, 2*pi); inputs that wrap are split at zero during
    merging, so a fully covered circle is exactly ((0.0, 2*pi),).
    """

    center: int
    radius: float
    arcs: tuple[tuple[float, float], ...]

    def total_measure(self) -> float:
        return sum(b - a for a, b in self.arcs)


def hyperbola_arc(
    h: PathHyperbola, lam: float, points: PointSet
) -> Optional[tuple[float, float]]:
    """Directions theta for which the point at polar (lam, theta) around the
    origin lies in the hyperbola region.

    Solved through the law of cosines: the membership inequality at radius
    lam reduces to cos(theta - phi) >= C with phi the direction of the focus.
    Returns (start, end) in radians with 0 <= start < 2*pi and
    end - start <= 2*pi; (0, 2*pi) means the full circle, None an empty set.
    Near-tangent solutions are treated as empty.
    """
    if not (lam > 0.0 and math.isfinite(lam)):
        raise ValueError(f"lambda must be positive and finite, got {lam!r}")
    tv = stretch_value(h.t)
    xs, ys = points.xs, points.ys
    ux, uy = xs[h.origin], ys[h.origin]
    vx, vy = xs[h.focus], ys[h.focus]
    d = math.hypot(ux - vx, uy - vy)
    if h.delta < d * (1.0 - 1e-9):
        raise ValueError(
            f"network distance {h.delta} below Euclidean distance {d} "
            f"for ({h.origin}, {h.focus})"
        )
    # membership at radius lam: delta + t*|v x| <= t*lam  <=>  |v x| <= R
    R = lam - h.delta / tv
    if R < 0.0:
        return None
    if d == 0.0:
        return (0.0, TWO_PI) if lam <= R else None
    C = (lam * lam + d * d - R * R) / (2.0 * lam * d)
    if C >= 1.0 - _TANGENT_EPS:
        return None
    if C <= -1.0:
        return (0.0, TWO_PI)
    psi = math.acos(C)
    phi = math.atan2(vy - uy, vx - ux)
    start = (phi - psi) % TWO_PI
    return (start, start + 2.0 * psi)


def merge_arcs(raw: list[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    """Normalise, sort and coalesce angular intervals into [0, 2*pi)."""
    segs: list[tuple[float, float]] = []
    for a, b in raw:
        width = b - a
        if width <= 0.0:
            continue
        if width >= TWO_PI:
            return ((0.0, TWO_PI),)
        a = a % TWO_PI
        end = a + width
        if end > TWO_PI:
            segs.append((a, TWO_PI))
            segs.append((0.0, end - TWO_PI))
        else:
            segs.append((a, end))
    if not segs:
        return ()
    segs.sort()
    merged: list[tuple[float, float]] = [segs[0]]
    for a, b in segs[1:]:
        la, lb = merged[-1]
        if a <= lb:
            if b > lb:
                merged[-1] = (la, b)
        else:
            merged.append((a, b))
    if len(merged) == 1 and merged[0][0] <= 0.0 and merged[0][1] >= TWO_PI:
        return ((0.0, TWO_PI),)
    return tuple(merged)


def build_coverage(
    u: int, reached: DistanceMap, t, lam: float, points: PointSet
) -> ArcSet:
    """Union of hyperbola arcs over the t-path-certified reached entries.

    Entries with delta > t*|uv| carry no certificate and are excluded, as are
    coincident-coordinate foci (their hyperbolas degenerate to half planes
    whose tie behaviour cannot be certified).  Each arc is shrunk by
    ARC_SHRINK per endpoint.  The arc formulas are evaluated in batch; they
    mirror :func:`hyperbola_arc` exactly.
    """
    import numpy as np

    tv = stretch_value(t)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise ValueError(f"lambda must be positive and finite, got {lam!r}")
    entries = reached.entries
    if not entries:
        return ArcSet(center=u, radius=lam, arcs=())
    ids = np.fromiter(entries.keys(), np.intp, len(entries))
    ds = np.fromiter(entries.values(), np.float64, len(entries))
    arr = points.as_array()
    dx = arr[ids, 0] - arr[u, 0]
    dy = arr[ids, 1] - arr[u, 1]
    d = np.hypot(dx, dy)
    if bool(((ds < d * (1.0 - 1e-9)) & (ids != u)).any()):
        raise ValueError("network distance below Euclidean distance in reached map")
    radius = lam - ds / tv
    cert = (ids != u) & (d > 0.0) & (ds <= tv * d) & (radius >= 0.0)
    if not bool(cert.any()):
        return ArcSet(center=u, radius=lam, arcs=())
    d = d[cert]
    radius = radius[cert]
    cos_half = (lam * lam + d * d - radius * radius) / (2.0 * lam * d)
    if bool((cos_half <= -1.0).any()):
        return ArcSet(center=u, radius=lam, arcs=((0.0, TWO_PI),))
    keep = cos_half < 1.0 - _TANGENT_EPS
    if not bool(keep.any()):
        return ArcSet(center=u, radius=lam, arcs=())
    half = np.arccos(cos_half[keep])
    phi = np.arctan2(dy[cert][keep], dx[cert][keep])
    start = (phi - half) % TWO_PI + ARC_SHRINK
    stop = start + 2.0 * (half - ARC_SHRINK)
    ok = stop > start
    raw = list(zip(start[ok].tolist(), stop[ok].tolist()))
    return ArcSet(center=u, radius=lam, arcs=merge_arcs(raw))


def is_fully_covered(arcs: ArcSet) -> bool:
    """Whether the merged arcs cover the entire circle.

    By ray monotonicity this certifies coverage of the whole region farther
    than the arc radius from the center.
    """
    a = arcs.arcs
    return len(a) == 1 and a[0][0] <= 0.0 and a[0][1] >= TWO_PI


def _interval_covered(
    arcs: tuple[tuple[float, float], ...], lo: float, hi: float
) -> bool:
    """Whether [lo, hi] (0 <= lo <= hi <= 2*pi) lies inside one merged arc."""
    if not arcs:
        return False
    if len(arcs) <= 4:
        for a, b in arcs:
            if a <= lo and hi <= b:
                return True
        return False
    k = bisect_right(arcs, (lo, math.inf)) - 1
    return k >= 0 and arcs[k][1] >= hi


def box_discounted(
    u: int,
    arcs: ArcSet,
    box: tuple[float, float, float, float],
    lam: float,
    points: PointSet,
) -> bool:
    """Whether the rectangle is certified entirely t-reachable from u.

    True requires the box's nearest point to lie at distance >= lam from u
    (the arcs only speak for the region beyond their radius) and the box's
    angular interval, as seen from u, to be contained in the covered arcs.
    A true result implies every point of the set inside the box has a t-path
    from u.
    """
    x0, y0, x1, y1 = box
    xs, ys = points.xs, points.ys
    ux, uy = xs[u], ys[u]
    nx = x0 if ux < x0 else (x1 if ux > x1 else ux)
    ny = y0 if uy < y0 else (y1 if uy > y1 else uy)
    if math.hypot(nx - ux, ny - uy) < lam:
        return False
    cover = arcs.arcs
    if not cover:
        return False
    if len(cover) == 1 and cover[0][0] <= 0.0 and cover[0][1] >= TWO_PI:
        return True
    # angular extent of a convex region not containing u spans < pi: it is
    # the complement of the largest gap between the corner directions
    angles = sorted(
        math.atan2(cy - uy, cx - ux) % TWO_PI
        for cx in (x0, x1)
        for cy in (y0, y1)
    )
    gap_at = 0
    gap = TWO_PI - angles[-1] + angles[0]
    for k in range(1, 4):
        g = angles[k] - angles[k - 1]
        if g > gap:
            gap = g
            gap_at = k
    if gap_at == 0:
        lo, hi = angles[0], angles[-1]
    else:
        lo, hi = angles[gap_at], angles[gap_at - 1] + TWO_PI
    if hi <= TWO_PI:
        return _interval_covered(cover, lo, hi)
    return _interval_covered(cover, lo, TWO_PI) and _interval_covered(
        cover, 0.0, hi - TWO_PI
    )
