"""Benchmark orchestration: runs algorithm cells and emits CSV records."""

from __future__ import annotations

import json
import os
import resource
import time
from dataclasses import dataclass, field
from typing import Optional

from .generators import RNG_NAME, GeneratorSpec, generate
from .geometry import PointSet
from .graph import SpannerGraph
from .greedy import (
    GreedyConfig,
    PhaseReport,
    greedy_bucketing,
    greedy_original,
    wspd_greedy,
)
from .svg import render_svg
from .tester import brute_force_test, test_spanner
from .tsplib import parse_tsplib

__all__ = [
    "SCHEMA_VERSION",
    "CSV_HEADER",
    "BenchRecord",
    "BenchConfig",
    "run_bench",
    "write_csv",
]

SCHEMA_VERSION = "1"
CSV_HEADER = (
    "schema,algo,n,t,seed,dataset,edges,max_edge,time_ms,mem_bytes,"
    "pairs_total,pairs_skipped,pairs_discounted,points_discounted_frac,"
    "phase1_ms,phase2_ms,phase3_ms"
)

_ALGORITHMS = ("original", "wspd-greedy", "bucketing", "test")


def _peak_mem_bytes() -> int:
    """Process peak RSS; coarse and monotone, meant for relative comparison."""
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


@dataclass
class BenchRecord:
    """One CSV row of the benchmark output."""

    algo: str
    n: int
    t: float
    seed: Optional[int]
    dataset: Optional[str]
    edges: int
    max_edge: float
    time_ms: float
    mem_bytes: int
    report: Optional[PhaseReport] = None

    def to_csv_row(self) -> str:
        r = self.report
        return ",".join(
            [
                SCHEMA_VERSION,
                self.algo,
                str(self.n),
                repr(self.t),
                "" if self.seed is None else str(self.seed),
                "" if self.dataset is None else self.dataset,
                str(self.edges),
                repr(self.max_edge),
                f"{self.time_ms:.3f}",
                str(self.mem_bytes),
                "" if r is None else str(r.pairs_total),
                "" if r is None else str(r.pairs_skipped_phase1),
                "" if r is None else str(r.pairs_discounted),
                "" if r is None else f"{r.points_discounted_fraction:.6f}",
                "" if r is None else f"{r.phase1_ms:.3f}",
                "" if r is None else f"{r.phase2_ms:.3f}",
                "" if r is None else f"{r.phase3_ms:.3f}",
            ]
        )


@dataclass
class BenchConfig:
    """What to run: algorithms x t values x (generated sizes + datasets).

    Cells run sequentially by default for timing fidelity; ``parallel``
    opts into one process per cell with isolated in-worker timing (threads
    never mix inside a timed cell).
    """

    algorithms: list[str] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)
    ts: list[float] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)
    distribution: str = "uniform"
    datasets: list[str] = field(default_factory=list)
    verify_cap: int = 2000
    lambda_factor: float = 1.1
    lambda_override: Optional[float] = None
    svg_dir: Optional[str] = None
    parallel: bool = False
    workers: Optional[int] = None

    def __post_init__(self) -> None:
        for algo in self.algorithms:
            if algo not in _ALGORITHMS:
                raise ValueError(
                    f"unknown algorithm {algo!r}; expected one of {_ALGORITHMS}"
                )

    @classmethod
    def from_json(cls, text: str) -> "BenchConfig":
        data = json.loads(text)
        return cls(
            algorithms=list(data.get("algorithms", [])),
            sizes=[int(v) for v in data.get("sizes", [])],
            ts=[float(v) for v in data.get("t", data.get("ts", []))],
            seeds=[int(v) for v in data.get("seeds", [])],
            distribution=data.get("distribution", "uniform"),
            datasets=list(data.get("datasets", [])),
            verify_cap=int(data.get("verify_cap", 2000)),
            lambda_factor=float(data.get("lambda_factor", 1.1)),
            lambda_override=(
                float(data["lambda_override"]) if data.get("lambda_override") else None
            ),
            svg_dir=data.get("svg_dir"),
            parallel=bool(data.get("parallel", False)),
            workers=(int(data["workers"]) if data.get("workers") else None),
        )

    @classmethod
    def from_file(cls, path: str) -> "BenchConfig":
        with open(path) as fh:
            return cls.from_json(fh.read())


def load_dataset(path: str) -> PointSet:
    """Read a dataset file: TSPLIB when it ends in .tsp, plain points else."""
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".tsp"):
        return parse_tsplib(text)
    coords = []
    for raw in text.splitlines():
        line = raw.strip()
        if line:
            x, y = line.split()
            coords.append((float(x), float(y)))
    return PointSet(coords)


def _run_cell(
    algo: str, points: PointSet, t: float, config: BenchConfig
) -> tuple[SpannerGraph, float, Optional[PhaseReport]]:
    cfg = GreedyConfig(
        t=t,
        lambda_factor=config.lambda_factor,
        lambda_override=config.lambda_override,
    )
    if algo == "original":
        t0 = time.perf_counter()
        g = greedy_original(points, t)
        return g, (time.perf_counter() - t0) * 1e3, None
    if algo == "wspd-greedy":
        t0 = time.perf_counter()
        g = wspd_greedy(points, t)
        return g, (time.perf_counter() - t0) * 1e3, None
    if algo == "bucketing":
        t0 = time.perf_counter()
        g, report = greedy_bucketing(points, cfg)
        return g, (time.perf_counter() - t0) * 1e3, report
    # 'test': time the spanner tester on the bucketing output
    g, _ = greedy_bucketing(points, cfg)
    t0 = time.perf_counter()
    verdict = test_spanner(points, g, t)
    elapsed = (time.perf_counter() - t0) * 1e3
    if not verdict.is_spanner:
        raise RuntimeError(
            f"tester rejected a constructed spanner: {verdict.to_line()}"
        )
    return g, elapsed, None


def _finish_cell(
    algo: str,
    points: PointSet,
    t: float,
    seed: Optional[int],
    dataset: Optional[str],
    config: BenchConfig,
    svg_path: Optional[str],
) -> BenchRecord:
    g, elapsed, report = _run_cell(algo, points, t, config)
    n = len(points)
    if algo != "test" and 2 <= n <= config.verify_cap:
        verdict = brute_force_test(points, g, t)
        if not verdict.is_spanner:
            raise RuntimeError(
                f"{algo} output failed verification at n={n}, t={t}: "
                f"{verdict.to_line()}"
            )
    if svg_path:
        with open(svg_path, "w") as fh:
            fh.write(render_svg(points, g))
    return BenchRecord(
        algo=algo,
        n=n,
        t=t,
        seed=seed,
        dataset=dataset,
        edges=g.edge_count,
        max_edge=g.max_edge_length(),
        time_ms=elapsed,
        mem_bytes=_peak_mem_bytes(),
        report=report,
    )


def _cell_worker(args) -> BenchRecord:
    return _finish_cell(*args)


def run_bench(config: BenchConfig) -> list[BenchRecord]:
    """Execute every cell; verify outputs up to the cap.

    Construction output is re-checked with the brute-force oracle whenever
    n <= verify_cap; a failed verification aborts the run.  The pinned PRNG
    (see generators.RNG_NAME) makes generated cells reproducible.  With
    ``config.parallel`` each cell runs in its own worker process and is
    timed there in isolation; record order is unchanged.
    """
    instances: list[tuple[PointSet, Optional[int], Optional[str]]] = []
    for n in config.sizes:
        for seed in config.seeds:
            pts = generate(GeneratorSpec(config.distribution, n, seed))
            instances.append((pts, seed, None))
    for path in config.datasets:
        instances.append((load_dataset(path), None, os.path.basename(path)))
    if config.svg_dir:
        os.makedirs(config.svg_dir, exist_ok=True)
    cells = []
    for algo in config.algorithms:
        for t in config.ts:
            for points, seed, dataset in instances:
                svg_path = None
                if config.svg_dir:
                    tag = dataset if dataset else (
                        f"{config.distribution}{len(points)}-s{seed}"
                    )
                    name = f"{algo}-{tag}-t{t}.svg".replace("/", "_")
                    svg_path = os.path.join(config.svg_dir, name)
                cells.append((algo, points, t, seed, dataset, config, svg_path))
    if not config.parallel:
        return [_finish_cell(*cell) for cell in cells]
    from concurrent.futures import ProcessPoolExecutor

    workers = config.workers or min(len(cells), os.cpu_count() or 1)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_cell_worker, cells))


def write_csv(records: list[BenchRecord], path: str) -> None:
    """CSV with the versioned schema header; PRNG noted as a comment row."""
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        fh.write(f"# rng={RNG_NAME}\n")
        for rec in records:
            fh.write(rec.to_csv_row() + "\n")
