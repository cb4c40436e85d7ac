import math
import random

import pytest

from greedyspan.generators import GeneratorSpec, generate
from greedyspan.geometry import PointSet, dist, is_mandatory
from greedyspan.graph import SpannerGraph, has_t_path
from greedyspan.greedy import (
    GreedyConfig,
    default_sigma,
    discount_pairs,
    effective_lambda,
    greedy_bucketing,
    greedy_original,
    greedy_short_edges,
    lambda_hat,
    wspd_greedy,
)
from greedyspan.grid import build_grid
from greedyspan.tester import brute_force_test


def _greedy_reference(points, t):
    """Literal pair scan with a fresh bounded Dijkstra per decision."""
    n = len(points)
    pairs = sorted(
        (dist(points[u], points[v]), u, v)
        for u in range(n)
        for v in range(u + 1, n)
    )
    g = SpannerGraph(points)
    for _, u, v in pairs:
        if not has_t_path(g, u, v, t):
            g.add_edge(u, v)
    return g


class TestGreedyOriginal:
    def test_three_collinear(self):
        pts = PointSet([(0, 0), (1, 0), (2, 0)])
        g = greedy_original(pts, 2.0)
        assert g.edge_set() == {(0, 1), (1, 2)}

    def test_tiny_inputs(self):
        assert greedy_original(PointSet([]), 2.0).edge_count == 0
        assert greedy_original(PointSet([(1, 1)]), 2.0).edge_count == 0

    def test_unit_square_low_t(self):
        pts = PointSet([(0, 0), (1, 0), (0, 1), (1, 1)])
        g = greedy_original(pts, 1.1)
        assert g.edge_count == 6  # four sides, then both diagonals

    def test_rejects_bad_t(self):
        with pytest.raises(ValueError):
            greedy_original(PointSet([(0, 0), (1, 0)]), 1.0)

    @pytest.mark.parametrize("t", [1.2, 2.0])
    def test_matches_literal_reference(self, t):
        for seed in (1, 2, 3):
            pts = generate(GeneratorSpec("uniform", 50, seed))
            assert greedy_original(pts, t).edge_set() == _greedy_reference(
                pts, t
            ).edge_set()


class TestWspdGreedy:
    def test_two_points(self):
        g = wspd_greedy(PointSet([(0, 0), (3, 1)]), 2.0)
        assert g.edge_set() == {(0, 1)}

    def test_spec_examples_match_original(self):
        for coords, t in [
            ([(0, 0), (1, 0), (2, 0)], 2.0),
            ([(0, 0), (1, 0), (0, 1), (1, 1)], 1.1),
        ]:
            pts = PointSet(coords)
            assert wspd_greedy(pts, t).edge_set() == greedy_original(pts, t).edge_set()

    @pytest.mark.parametrize("dist_name", ["uniform", "clustered"])
    @pytest.mark.parametrize("t", [1.1, 1.5, 2.0, 3.0])
    def test_matches_original(self, dist_name, t):
        for seed in (1, 2):
            pts = generate(GeneratorSpec(dist_name, 150, seed))
            assert wspd_greedy(pts, t).edge_set() == greedy_original(pts, t).edge_set()

    def test_small_sigma_still_exact(self):
        # below the one-edge-per-pair threshold the driver must keep pairs
        # alive after an insertion and stay correct
        pts = generate(GeneratorSpec("uniform", 120, 9))
        g = wspd_greedy(pts, 2.0, sigma=1.5)
        assert g.edge_set() == greedy_original(pts, 2.0).edge_set()


class TestGreedyShortEdges:
    def test_collinear_cutoff(self):
        pts = PointSet([(0, 0), (1, 0), (2, 0)])
        grid = build_grid(pts, 1.5)
        g, skipped, maps = greedy_short_edges(pts, 2.0, 1.5, grid)
        assert g.edge_set() == {(0, 1), (1, 2)}
        covered = set()
        for pair in skipped:
            for u in pair.left.point_ids:
                for v in pair.right.point_ids:
                    covered.add((min(u, v), max(u, v)))
        assert (0, 2) in covered
        assert maps[0].entries[1] == 1.0

    def test_large_lambda_equals_full_run(self):
        pts = generate(GeneratorSpec("uniform", 80, 3))
        lam = 1e6
        grid = build_grid(pts, 10.0)
        g, skipped, _ = greedy_short_edges(pts, 2.0, lam, grid)
        assert g.edge_set() == greedy_original(pts, 2.0).edge_set()
        assert skipped == []

    def test_far_clusters(self):
        pts = PointSet([(0, 0), (1, 0), (100, 0), (101, 0)])
        grid = build_grid(pts, 5.0)
        g, skipped, maps = greedy_short_edges(pts, 2.0, 5.0, grid)
        assert g.edge_set() == {(0, 1), (2, 3)}
        assert len(skipped) == 1
        sets = {
            frozenset(skipped[0].left.point_ids),
            frozenset(skipped[0].right.point_ids),
        }
        assert sets == {frozenset((0, 1)), frozenset((2, 3))}
        assert set(maps) == {0, 1, 2, 3}

    def test_prefix_of_oracle(self):
        # edges of length <= lambda equal the oracle's short edges exactly
        for seed in (1, 2, 3):
            pts = generate(GeneratorSpec("uniform", 120, seed))
            lam = 2.5
            grid = build_grid(pts, lam)
            g, _, _ = greedy_short_edges(pts, 2.0, lam, grid)
            oracle = greedy_original(pts, 2.0)
            expected = {
                (u, v) for u, v, w in oracle.edges() if w <= lam
            }
            assert g.edge_set() == expected


class TestDiscountPairs:
    def _phase12(self, coords, t, lam):
        from greedyspan.coverage import build_coverage

        pts = PointSet(coords)
        grid = build_grid(pts, lam)
        g, skipped, maps = greedy_short_edges(pts, t, lam, grid)
        coverages = {
            s: build_coverage(s, maps[s], t, lam, pts) for s in maps
        }
        return pts, g, skipped, coverages

    def test_far_clusters_not_discounted(self):
        pts, g, skipped, coverages = self._phase12(
            [(0, 0), (1, 0), (100, 0), (101, 0)], 2.0, 5.0
        )
        discounted, survivors, stats = discount_pairs(skipped, coverages, 5.0)
        assert discounted == []
        assert stats.pairs_discounted == 0
        # the outer points are discounted, the inner bridge points are not
        disc_ids = set().union(*survivors[0]) if survivors else set()
        assert 1 not in disc_ids and 2 not in disc_ids

    def test_empty_coverage_discounts_nothing(self):
        pts = PointSet([(0, 0), (1, 0), (100, 0), (101, 0)])
        grid = build_grid(pts, 5.0)
        _, skipped, _ = greedy_short_edges(pts, 2.0, 5.0, grid)
        from greedyspan.coverage import ArcSet

        empty = {i: ArcSet(i, 5.0, ()) for i in range(4)}
        discounted, _, stats = discount_pairs(skipped, empty, 5.0)
        assert discounted == [] and stats.pairs_discounted == 0

    def test_full_coverage_discounts_far_pairs(self):
        from greedyspan.coverage import ArcSet, TWO_PI

        pts = PointSet([(0, 0), (1, 0), (100, 0), (101, 0)])
        grid = build_grid(pts, 5.0)
        _, skipped, _ = greedy_short_edges(pts, 2.0, 5.0, grid)
        full = {i: ArcSet(i, 5.0, ((0.0, TWO_PI),)) for i in range(4)}
        discounted, survivors, stats = discount_pairs(skipped, full, 5.0)
        assert stats.pairs_discounted == len(skipped) == 1
        assert survivors == {}
        assert stats.points_discounted_fraction == 1.0


class TestGreedyBucketing:
    def test_far_clusters_phase3_adds_bridge(self):
        pts = PointSet([(0, 0), (1, 0), (100, 0), (101, 0)])
        cfg = GreedyConfig(t=2.0, lambda_override=5.0)
        g, report = greedy_bucketing(pts, cfg)
        assert g.edge_set() == greedy_original(pts, 2.0).edge_set()
        assert (1, 2) in g.edge_set()
        assert report.short_edges == 2
        assert report.phase3_edges == 1
        assert report.pairs_discounted == 0

    def test_tiny_inputs(self):
        g, report = greedy_bucketing(PointSet([]), GreedyConfig(t=2.0))
        assert g.edge_count == 0 and report.pairs_total == 0
        g, _ = greedy_bucketing(PointSet([(5, 5)]), GreedyConfig(t=2.0))
        assert g.edge_count == 0

    @pytest.mark.parametrize("dist_name", ["uniform", "clustered"])
    @pytest.mark.parametrize("t", [1.1, 1.5, 2.0, 3.0])
    def test_matches_original(self, dist_name, t):
        for seed in (1, 2):
            pts = generate(GeneratorSpec(dist_name, 150, seed))
            g, report = greedy_bucketing(pts, GreedyConfig(t=t))
            assert g.edge_set() == greedy_original(pts, t).edge_set()
            assert report.short_edges + report.phase3_edges == g.edge_count
            assert report.pairs_discounted <= report.pairs_skipped_phase1
            assert report.pairs_skipped_phase1 <= report.pairs_total

    def test_output_is_t_spanner(self):
        for t in (1.3, 2.0):
            pts = generate(GeneratorSpec("uniform", 200, 11))
            g, _ = greedy_bucketing(pts, GreedyConfig(t=t))
            assert brute_force_test(pts, g, t).is_spanner

    def test_mandatory_pairs_present(self):
        pts = generate(GeneratorSpec("uniform", 90, 13))
        t = 2.0
        g, _ = greedy_bucketing(pts, GreedyConfig(t=t))
        edges = g.edge_set()
        for u in range(len(pts)):
            for v in range(u + 1, len(pts)):
                if is_mandatory(pts[u], pts[v], pts, t):
                    assert (u, v) in edges

    def test_greedy_prefix_property(self):
        # replaying edges ascending, each was necessary over shorter edges
        pts = generate(GeneratorSpec("uniform", 100, 19))
        t = 2.0
        g, _ = greedy_bucketing(pts, GreedyConfig(t=t))
        edges = sorted((w, u, v) for u, v, w in g.edges())
        replay = SpannerGraph(pts)
        for w, u, v in edges:
            assert not has_t_path(replay, u, v, t)
            replay.add_edge(u, v)


class TestTieHeavyExactness:
    """Degenerate inputs where many pair lengths coincide exactly; the three
    constructions must still agree edge for edge through the id tie order."""

    CASES = {
        "lattice": [(x, y) for x in range(7) for y in range(7)],
        "duplicates": [(0, 0), (1, 0), (1, 0), (2, 1), (0, 0), (3, 3)],
        "collinear": [(i, 0) for i in range(25)],
        "circles": [
            (math.cos(2 * math.pi * k / 12) * r, math.sin(2 * math.pi * k / 12) * r)
            for r in (1, 2, 3)
            for k in range(12)
        ],
    }

    @pytest.mark.parametrize("name", sorted(CASES))
    @pytest.mark.parametrize("t", [1.1, 2.0])
    def test_exact_agreement(self, name, t):
        pts = PointSet(self.CASES[name])
        oracle = greedy_original(pts, t)
        assert wspd_greedy(pts, t).edge_set() == oracle.edge_set()
        bucket, _ = greedy_bucketing(pts, GreedyConfig(t=t))
        assert bucket.edge_set() == oracle.edge_set()
        assert brute_force_test(pts, oracle, t).is_spanner


def test_bounded_map_equals_local_dijkstra():
    from greedyspan.graph import local_dijkstra
    from greedyspan.greedy import _bounded_map

    rng = random.Random(3)
    pts = generate(GeneratorSpec("uniform", 300, 6))
    g = greedy_original(pts, 2.0)
    grid = build_grid(pts, 2.0)
    for _ in range(100):
        s = rng.randrange(300)
        lam = rng.uniform(0.5, 5.0)
        assert (
            _bounded_map(g, grid, s, lam, 2.0).entries
            == local_dijkstra(g, grid, s, lam, 2.0).entries
        )


class TestLambdaFormula:
    def test_lambda_hat_reference_values(self):
        # log n / ((t-1)^(1/4) log log n) at n = 10^4, t = 2
        expected = math.log(1e4) / math.log(math.log(1e4))
        assert lambda_hat(10000, 2.0) == pytest.approx(expected, rel=1e-12)
        assert lambda_hat(10000, 17.0) == pytest.approx(
            expected / (16.0 ** 0.25), rel=1e-12
        )

    def test_effective_lambda_scales_with_density(self):
        pts_unit = generate(GeneratorSpec("uniform", 400, 1))
        scaled = PointSet([(10 * x, 10 * y) for x, y in zip(pts_unit.xs, pts_unit.ys)])
        cfg = GreedyConfig(t=2.0)
        ratio = effective_lambda(scaled, cfg) / effective_lambda(pts_unit, cfg)
        assert ratio == pytest.approx(10.0, rel=1e-9)

    def test_override_wins(self):
        pts = generate(GeneratorSpec("uniform", 400, 1))
        cfg = GreedyConfig(t=2.0, lambda_override=3.25)
        assert effective_lambda(pts, cfg) == 3.25

    def test_default_sigma(self):
        assert default_sigma(2.0) == 12.0
        assert default_sigma(3.0) == 8.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            GreedyConfig(t=1.0)
        with pytest.raises(ValueError):
            GreedyConfig(t=2.0, lambda_factor=0.0)
        with pytest.raises(ValueError):
            GreedyConfig(t=2.0, sigma=-1.0)
