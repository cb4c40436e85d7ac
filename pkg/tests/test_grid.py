import math
import random

import pytest

from greedyspan.generators import GeneratorSpec, generate
from greedyspan.geometry import Point, PointSet
from greedyspan.grid import build_grid, points_within


class TestBuildGrid:
    def test_floor_arithmetic(self):
        pts = PointSet([(0, 0), (1.5, 0)])
        grid = build_grid(pts, 1.0)
        assert grid.cells[(0, 0)] == [0]
        assert grid.cells[(1, 0)] == [1]

    def test_singleton(self):
        pts = PointSet([(3.7, -2.2)])
        grid = build_grid(pts, 123.0)
        assert len(grid.cells) == 1

    def test_errors(self):
        with pytest.raises(ValueError):
            build_grid(PointSet([]), 1.0)
        with pytest.raises(ValueError):
            build_grid(PointSet([(0, 0)]), 0.0)
        with pytest.raises(ValueError):
            build_grid(PointSet([(0, 0)]), -2.0)

    def test_membership_exhaustive(self):
        pts = generate(GeneratorSpec("uniform", 10000, 5))
        grid = build_grid(pts, 5.0)
        seen = []
        for (cx, cy), bucket in grid.cells.items():
            for i in bucket:
                assert grid.cell_of(pts.xs[i], pts.ys[i]) == (cx, cy)
                seen.append(i)
        assert sorted(seen) == list(range(len(pts)))

    def test_enumeration_is_permutation(self):
        pts = generate(GeneratorSpec("clustered", 500, 9))
        grid = build_grid(pts, 2.5)
        ids = sorted(i for bucket in grid.cells.values() for i in bucket)
        assert ids == list(range(500))

    def test_max_corner_clamped(self):
        pts = PointSet([(0, 0), (10, 10)])
        grid = build_grid(pts, 1.0)
        ex, ey = grid.extent
        assert all(0 <= cx < ex and 0 <= cy < ey for cx, cy in grid.cells)


class TestPointsWithin:
    def test_zero_radius(self):
        pts = PointSet([(0, 0), (3, 0), (10, 0)])
        grid = build_grid(pts, 1.0)
        assert points_within(grid, pts[0], 0.0) == [0]

    def test_saturation(self):
        pts = PointSet([(0, 0), (3, 0), (10, 0)])
        grid = build_grid(pts, 1.0)
        assert points_within(grid, pts[0], 1e9) == [0, 1, 2]

    def test_simple_filter(self):
        pts = PointSet([(0, 0), (3, 0), (10, 0)])
        grid = build_grid(pts, 1.0)
        assert points_within(grid, pts[0], 5.0) == [0, 1]

    def test_negative_radius(self):
        pts = PointSet([(0, 0)])
        grid = build_grid(pts, 1.0)
        with pytest.raises(ValueError):
            points_within(grid, pts[0], -1.0)

    def test_matches_brute_force(self):
        rng = random.Random(11)
        pts = generate(GeneratorSpec("uniform", 2000, 3))
        grid = build_grid(pts, 3.1)
        for _ in range(1000):
            cx = rng.uniform(-5, math.sqrt(2000) + 5)
            cy = rng.uniform(-5, math.sqrt(2000) + 5)
            r = rng.uniform(0, 12)
            center = Point(cx, cy, -1)
            expected = [
                i
                for i in range(len(pts))
                if math.hypot(pts.xs[i] - cx, pts.ys[i] - cy) <= r
            ]
            assert points_within(grid, center, r) == expected
