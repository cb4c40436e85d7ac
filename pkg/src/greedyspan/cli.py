"""Command-line surface: generate, build, test, render, bench, tsplib-import."""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Optional, Sequence

from .bench import BenchConfig, BenchRecord, CSV_HEADER, run_bench, write_csv
from .generators import GeneratorSpec, generate
from .geometry import coordinate_duplicates
from .greedy import GreedyConfig, greedy_bucketing, greedy_original, wspd_greedy
from .storage import read_edge_list, read_points, write_edge_list, write_points
from .svg import render_svg
from .tester import test_spanner
from .tsplib import parse_tsplib


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="greedyspan",
        description="Greedy t-spanner construction, testing and benchmarking.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated point file")
    g.add_argument("--dist", required=True, choices=("uniform", "clustered", "normal"))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)

    b = sub.add_parser("build", help="construct a greedy spanner")
    b.add_argument("--algo", required=True, choices=("original", "wspd-greedy", "bucketing"))
    b.add_argument("--t", type=float, required=True)
    b.add_argument("--lambda-factor", type=float, default=1.1)
    b.add_argument("--lambda", dest="lambda_override", type=float, default=None)
    b.add_argument("--points", required=True)
    b.add_argument("--out-edges", required=True)
    b.add_argument("--report", default=None, help="append one CSV row here")

    t = sub.add_parser("test", help="test whether an edge set is a t-spanner")
    t.add_argument("--points", required=True)
    t.add_argument("--edges", required=True)
    t.add_argument("--t", type=float, required=True)
    t.add_argument("--lambda", dest="lambda_override", type=float, default=None)

    r = sub.add_parser("render", help="render points and edges to SVG")
    r.add_argument("--points", required=True)
    r.add_argument("--edges", default=None)
    r.add_argument("--out", required=True)

    be = sub.add_parser("bench", help="run a benchmark config, write CSV")
    be.add_argument("--config", required=True)
    be.add_argument("--out", required=True)

    ti = sub.add_parser("tsplib-import", help="convert a TSPLIB file to a point file")
    ti.add_argument("--in", dest="infile", required=True)
    ti.add_argument("--out", required=True)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "generate":
        points = generate(GeneratorSpec(args.dist, args.n, args.seed))
        write_points(points, args.out)
        print(f"wrote {len(points)} points to {args.out}")
        return 0

    if args.command == "build":
        points = read_points(args.points)
        cfg = GreedyConfig(
            t=args.t,
            lambda_factor=args.lambda_factor,
            lambda_override=args.lambda_override,
        )
        t0 = time.perf_counter()
        report = None
        if args.algo == "original":
            g = greedy_original(points, args.t)
        elif args.algo == "wspd-greedy":
            g = wspd_greedy(points, args.t)
        else:
            g, report = greedy_bucketing(points, cfg)
        elapsed = (time.perf_counter() - t0) * 1e3
        write_edge_list(g, args.out_edges)
        print(
            f"{args.algo}: n={len(points)} t={args.t} edges={g.edge_count} "
            f"time={elapsed:.1f}ms -> {args.out_edges}"
        )
        if args.report:
            rec = BenchRecord(
                algo=args.algo,
                n=len(points),
                t=args.t,
                seed=None,
                dataset=os.path.basename(args.points),
                edges=g.edge_count,
                max_edge=g.max_edge_length(),
                time_ms=elapsed,
                mem_bytes=0,
                report=report,
            )
            fresh = not os.path.exists(args.report)
            with open(args.report, "a") as fh:
                if fresh:
                    fh.write(CSV_HEADER + "\n")
                fh.write(rec.to_csv_row() + "\n")
        return 0

    if args.command == "test":
        points = read_points(args.points)
        g = read_edge_list(args.edges, points)
        verdict = test_spanner(points, g, args.t, args.lambda_override)
        print(verdict.to_line())
        return 0 if verdict.is_spanner else 1

    if args.command == "render":
        points = read_points(args.points)
        g = read_edge_list(args.edges, points) if args.edges else None
        with open(args.out, "w") as fh:
            fh.write(render_svg(points, g))
        print(f"wrote {args.out}")
        return 0

    if args.command == "bench":
        config = BenchConfig.from_file(args.config)
        records = run_bench(config)
        write_csv(records, args.out)
        print(f"wrote {len(records)} rows to {args.out}")
        return 0

    if args.command == "tsplib-import":
        with open(args.infile) as fh:
            points = parse_tsplib(fh.read())
        dups = coordinate_duplicates(points)
        if dups:
            print(
                f"warning: {len(dups)} duplicate coordinate pairs "
                f"(first: ids {dups[0][0]} and {dups[0][1]})",
                file=sys.stderr,
            )
        write_points(points, args.out)
        print(f"wrote {len(points)} points to {args.out}")
        return 0

    raise AssertionError("unreachable")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
