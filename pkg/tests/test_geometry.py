import math
import random

import pytest

from greedyspan.geometry import (
    Point,
    PointSet,
    StretchFactor,
    bridges,
    coordinate_duplicates,
    dist,
    ellipse_contains,
    is_mandatory,
    stretch_value,
)
from samplers import sample_cone_config, sample_two_rectangle_config


def P(x, y, i=-1):
    return Point(x, y, i)


class TestDist:
    def test_three_four_five(self):
        assert dist(P(0, 0), P(3, 4)) == 5.0

    def test_identity(self):
        assert dist(P(1, 1), P(1, 1)) == 0.0

    def test_sqrt2(self):
        assert dist(P(0, 0), P(1, 1)) == pytest.approx(math.sqrt(2), abs=0)

    def test_symmetry(self):
        rng = random.Random(1)
        for _ in range(100):
            u = P(rng.uniform(-5, 5), rng.uniform(-5, 5))
            v = P(rng.uniform(-5, 5), rng.uniform(-5, 5))
            assert dist(u, v) == dist(v, u)


class TestStretchFactor:
    def test_rejects_low(self):
        with pytest.raises(ValueError):
            StretchFactor(1.0)
        with pytest.raises(ValueError):
            StretchFactor(0.5)

    def test_accepts_and_coerces(self):
        assert stretch_value(StretchFactor(2.0)) == 2.0
        assert stretch_value(1.5) == 1.5
        with pytest.raises(ValueError):
            stretch_value(1.0)


class TestBridges:
    def test_collinear_true(self):
        assert bridges(P(0, 0), P(10, 0), P(4, 0), P(6, 0), 2.0)

    def test_off_axis_false(self):
        # 2*sqrt(13) + 5 + 8 > 20
        assert not bridges(P(0, 0), P(10, 0), P(2, 3), P(6, 0), 2.0)

    def test_lower_t_true(self):
        # 6 + 2 + 6 = 14 <= 15
        assert bridges(P(0, 0), P(10, 0), P(4, 0), P(6, 0), 1.5)

    def test_rejects_coincident(self):
        with pytest.raises(ValueError):
            bridges(P(0, 0), P(10, 0), P(0, 0), P(6, 0), 2.0)

    def test_predicate_matches_inequality_across_t(self):
        # direct re-evaluation decides the predicate at any stretch factor
        rng = random.Random(7)
        for _ in range(300):
            pts = [P(rng.uniform(-10, 10), rng.uniform(-10, 10)) for _ in range(4)]
            a, b, p, q = pts
            if len({(pt.x, pt.y) for pt in pts}) < 4:
                continue
            for t in (1.1, 1.5, 2.0, 3.0, 5.0):
                lhs = t * dist(a, p) + dist(p, q) + t * dist(q, b)
                assert bridges(a, b, p, q, t) == (lhs <= t * dist(a, b))


class TestEllipseContains:
    def test_midpoint(self):
        assert ellipse_contains(P(0, 0), P(2, 0), 2.0, P(1, 0))

    def test_border_inclusive(self):
        assert ellipse_contains(P(0, 0), P(2, 0), 2.0, P(3, 0))

    def test_outside(self):
        assert not ellipse_contains(P(0, 0), P(2, 0), 2.0, P(1, 2.1))

    def test_rejects_equal_foci(self):
        with pytest.raises(ValueError):
            ellipse_contains(P(1, 1), P(1, 1), 2.0, P(0, 0))

    def test_foci_always_inside(self):
        rng = random.Random(3)
        for _ in range(200):
            p = P(rng.uniform(-5, 5), rng.uniform(-5, 5))
            q = P(rng.uniform(-5, 5), rng.uniform(-5, 5))
            if (p.x, p.y) == (q.x, q.y):
                continue
            t = rng.uniform(1.01, 4.0)
            assert ellipse_contains(p, q, t, p)
            assert ellipse_contains(p, q, t, q)


class TestIsMandatory:
    def test_two_points(self):
        pts = PointSet([(0, 0), (2, 0)])
        assert is_mandatory(pts[0], pts[1], pts, 2.0)

    def test_midpoint_blocks(self):
        pts = PointSet([(0, 0), (2, 0), (1, 0)])
        assert not is_mandatory(pts[0], pts[1], pts, 2.0)

    def test_outside_point_keeps_mandatory(self):
        pts = PointSet([(0, 0), (2, 0), (1, 2.1)])
        assert is_mandatory(pts[0], pts[1], pts, 2.0)

    def test_rejects_foreign_point(self):
        pts = PointSet([(0, 0), (2, 0)])
        with pytest.raises(ValueError):
            is_mandatory(Point(5, 5, 3), pts[1], pts, 2.0)
        with pytest.raises(ValueError):
            is_mandatory(Point(9, 9, 0), pts[1], pts, 2.0)


class TestPointSet:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            PointSet([(0.0, math.nan)])
        with pytest.raises(ValueError):
            PointSet([(math.inf, 0.0)])

    def test_ids_follow_insertion_order(self):
        pts = PointSet([(3, 4), (1, 2)])
        assert [p.id for p in pts] == [0, 1]
        assert pts[1].x == 1.0

    def test_duplicate_detection(self):
        pts = PointSet([(0, 0), (1, 1), (0, 0)])
        assert coordinate_duplicates(pts) == [(0, 2)]


def test_two_rectangle_configs_always_bridge():
    rng = random.Random(20240811)
    for _ in range(200):
        a, b, p, q, t = sample_two_rectangle_config(rng)
        assert bridges(a, b, p, q, t)


def test_cone_configs_always_bridge():
    rng = random.Random(42)
    for _ in range(50):
        a, p, q, t, sample_target = sample_cone_config(rng)
        for _ in range(20):
            b = sample_target(rng)
            assert bridges(a, b, p, q, t)
