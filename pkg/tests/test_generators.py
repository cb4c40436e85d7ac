import math

import pytest

from greedyspan.generators import GeneratorSpec, generate
from greedyspan.geometry import coordinate_duplicates


class TestSpecValidation:
    def test_unknown_distribution(self):
        with pytest.raises(ValueError):
            GeneratorSpec("gaussian", 10, 1)

    def test_negative_n(self):
        with pytest.raises(ValueError):
            GeneratorSpec("uniform", -1, 1)


class TestUniform:
    def test_bounds(self):
        pts = generate(GeneratorSpec("uniform", 4, 99))
        assert len(pts) == 4
        for x, y in zip(pts.xs, pts.ys):
            assert 0.0 <= x <= 2.0 and 0.0 <= y <= 2.0

    def test_empty(self):
        assert len(generate(GeneratorSpec("uniform", 0, 1))) == 0

    def test_determinism_bit_for_bit(self):
        a = generate(GeneratorSpec("uniform", 500, 1234))
        b = generate(GeneratorSpec("uniform", 500, 1234))
        assert a.xs == b.xs and a.ys == b.ys

    def test_seed_changes_stream(self):
        a = generate(GeneratorSpec("uniform", 50, 1))
        b = generate(GeneratorSpec("uniform", 50, 2))
        assert a.xs != b.xs


class TestClustered:
    def test_count_and_bounds(self):
        n = 137
        pts = generate(GeneratorSpec("clustered", n, 5))
        side = math.sqrt(n)
        assert len(pts) == n
        for x, y in zip(pts.xs, pts.ys):
            assert 0.0 <= x <= side and 0.0 <= y <= side

    def test_clumpier_than_uniform(self):
        # cluster squares overlap and leave gaps, so nearest neighbours sit
        # closer on average than under the uniform distribution
        import greedyspan.grid as grid_mod

        def mean_nn(pts):
            grid = grid_mod.build_grid(pts, 1.0)
            total = 0.0
            for i in range(len(pts)):
                best = math.inf
                r = 1.0
                while best == math.inf:
                    for j in grid_mod.points_within(grid, pts[i], r):
                        if j != i:
                            d = math.hypot(
                                pts.xs[i] - pts.xs[j], pts.ys[i] - pts.ys[j]
                            )
                            best = min(best, d)
                    r *= 2
                total += best
            return total / len(pts)

        n = 400
        clustered = mean_nn(generate(GeneratorSpec("clustered", n, 8)))
        uniform = mean_nn(generate(GeneratorSpec("uniform", n, 8)))
        assert clustered < uniform

    def test_determinism(self):
        a = generate(GeneratorSpec("clustered", 203, 77))
        b = generate(GeneratorSpec("clustered", 203, 77))
        assert a.xs == b.xs and a.ys == b.ys


class TestNormal:
    def test_bounds_and_count(self):
        n = 251
        pts = generate(GeneratorSpec("normal", n, 3))
        side = math.sqrt(n)
        assert len(pts) == n
        for x, y in zip(pts.xs, pts.ys):
            assert 0.0 <= x <= side
            assert 0.0 <= y <= side

    def test_centered(self):
        n = 4000
        pts = generate(GeneratorSpec("normal", n, 12))
        side = math.sqrt(n)
        mx = sum(pts.xs) / n
        my = sum(pts.ys) / n
        assert abs(mx - side / 2) < 0.1 * side
        assert abs(my - side / 2) < 0.1 * side

    def test_determinism(self):
        a = generate(GeneratorSpec("normal", 100, 5))
        b = generate(GeneratorSpec("normal", 100, 5))
        assert a.xs == b.xs and a.ys == b.ys


def test_generators_avoid_duplicates():
    for dist in ("uniform", "clustered", "normal"):
        pts = generate(GeneratorSpec(dist, 2000, 42))
        assert coordinate_duplicates(pts) == []
