"""Greedy t-spanner construction, testing and benchmarking on planar points."""

from .coverage import (
    ArcSet,
    PathHyperbola,
    box_discounted,
    build_coverage,
    hyperbola_arc,
    is_fully_covered,
)
from .generators import GeneratorSpec, generate
from .geometry import (
    Point,
    PointSet,
    StretchFactor,
    bridges,
    coordinate_duplicates,
    dist,
    ellipse_contains,
    is_mandatory,
)
from .graph import DistanceMap, SpannerGraph, dijkstra, has_t_path, local_dijkstra
from .greedy import (
    GreedyConfig,
    PhaseReport,
    default_sigma,
    discount_pairs,
    effective_lambda,
    greedy_bucketing,
    greedy_original,
    greedy_short_edges,
    lambda_hat,
    wspd_greedy,
)
from .grid import Grid, build_grid, points_within
from .svg import render_svg
from .tester import (
    TestVerdict,
    brute_force_test,
    default_test_lambda,
    is_locally_bridged,
    test_spanner,
)
from .tsplib import parse_tsplib, serialize_tsplib
from .wspd import (
    SplitTree,
    Wspd,
    WspdPair,
    build_split_tree,
    build_wspd,
    closest_pair_candidate,
)

__version__ = "0.1.0"

__all__ = [
    "Point",
    "PointSet",
    "StretchFactor",
    "dist",
    "bridges",
    "ellipse_contains",
    "is_mandatory",
    "coordinate_duplicates",
    "Grid",
    "build_grid",
    "points_within",
    "SpannerGraph",
    "DistanceMap",
    "dijkstra",
    "local_dijkstra",
    "has_t_path",
    "SplitTree",
    "Wspd",
    "WspdPair",
    "build_split_tree",
    "build_wspd",
    "closest_pair_candidate",
    "PathHyperbola",
    "ArcSet",
    "hyperbola_arc",
    "build_coverage",
    "is_fully_covered",
    "box_discounted",
    "GreedyConfig",
    "PhaseReport",
    "lambda_hat",
    "default_sigma",
    "effective_lambda",
    "greedy_original",
    "wspd_greedy",
    "greedy_short_edges",
    "discount_pairs",
    "greedy_bucketing",
    "TestVerdict",
    "test_spanner",
    "brute_force_test",
    "default_test_lambda",
    "is_locally_bridged",
    "GeneratorSpec",
    "generate",
    "render_svg",
    "parse_tsplib",
    "serialize_tsplib",
]
