"""Command-line interface: single-dataset resampling, benchmark sweeps,
rank/statistics reports, and stand-in dataset generation.

Exit codes: 0 success, 1 partial benchmark failure, 2 usage or config
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .benchmark import (BenchmarkConfig, build_manifest, discover_datasets, render_report,
                        resolve_jobs, run_benchmark, write_report_files)
from .data import load_dataset, save_dataset
from .datasets import CATALOG, DEFAULT_SUITE_SEED, write_benchmark_suite
from .errors import RwmauError
from .graph import build_graph, dump_edges
from .metrics import average_ranks, friedman_finner, read_table_csv
from .resample import ResampleConfig, apply_method
from .walk import dump_scores

RESAMPLE_METHODS = ("rwmau", "rus", "cc", "ncr")
ALL_METHODS = ("rwmau", "none", "rus", "cc", "ncr")
ALL_CLASSIFIERS = ("knn", "tree", "bagging")


def _detect_format(path: str, fmt: str) -> str:
    if fmt != "auto":
        return fmt
    return "keel" if os.path.splitext(path)[1].lower() in (".dat", ".keel") else "csv"


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def cmd_resample(args) -> int:
    fmt = _detect_format(args.input, args.format)
    t0 = time.perf_counter()
    ds = load_dataset(args.input, fmt)
    t_load = time.perf_counter() - t0

    cfg = ResampleConfig(alpha=args.alpha, k=args.k, gamma=args.gamma,
                         walks_per_start=args.walks_per_start, seed=args.seed,
                         method=args.method)
    t0 = time.perf_counter()
    result = apply_method(ds, cfg)
    t_resample = time.perf_counter() - t0

    os.makedirs(args.out, exist_ok=True)
    t0 = time.perf_counter()
    save_dataset(result.augmented, os.path.join(args.out, "augmented.csv"))
    with open(os.path.join(args.out, "removed.txt"), "w", encoding="utf-8", newline="\n") as fh:
        for idx in result.removed_indices:
            fh.write(f"{int(idx)}\n")
    if args.dump_scores and result.scores is not None:
        with open(os.path.join(args.out, "scores.txt"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dump_scores(result.scores))
    if args.dump_graph:
        with open(os.path.join(args.out, "graph.txt"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dump_edges(build_graph(ds.features, cfg.k)))
    t_write = time.perf_counter() - t0

    manifest = {
        "tool": "rwmau",
        "version": __version__,
        "command": "resample",
        "seed": args.seed,
        "config": {"input": os.path.abspath(args.input), "format": fmt, "method": args.method,
                   "alpha": args.alpha, "k": args.k, "gamma": args.gamma,
                   "walks_per_start": args.walks_per_start},
        "input_sha256": _sha256(args.input),
        "dataset": {"n": ds.n, "d": ds.d, "n_minority": ds.n_minority, "n_majority": ds.n_majority},
        "result": {"n_augmented": result.augmented.n, "n_removed": int(result.removed_indices.size)},
        "timings_seconds": {"load": round(t_load, 3), "resample": round(t_resample, 3),
                            "write": round(t_write, 3)},
    }
    with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_benchmark(args) -> int:
    files = discover_datasets(args.data_dir)
    if not files:
        print(f"error: no dataset files in {args.data_dir}", file=sys.stderr)
        return 2
    methods = tuple("none" if m == "original" else m for m in args.methods.split(","))
    for m in methods:
        if m not in ALL_METHODS:
            print(f"error: unknown method {m!r}", file=sys.stderr)
            return 2
    classifiers = tuple(args.classifiers.split(","))
    for c in classifiers:
        if c not in ALL_CLASSIFIERS:
            print(f"error: unknown classifier {c!r}", file=sys.stderr)
            return 2

    cfg = BenchmarkConfig(methods=methods, classifiers=classifiers, repetitions=args.reps,
                          seed=args.seed, alpha=args.alpha, train_fraction=args.train_fraction,
                          standardize=args.standardize, walks_per_start=args.walks_per_start,
                          tune_folds=args.tune_folds)
    jobs = resolve_jobs(args.jobs)
    report = run_benchmark(files, cfg, jobs=jobs)
    write_report_files(report, args.out, build_manifest(files, cfg, jobs, report))
    print(render_report(report))
    if report.failures:
        for name, msg in report.failures:
            print(f"error: dataset {name} failed: {msg}", file=sys.stderr)
        return 1
    return 0


def cmd_report(args) -> int:
    paths = list(args.tables)
    if args.dir:
        for fn in sorted(os.listdir(args.dir)):
            stem, ext = os.path.splitext(fn)
            if ext == ".csv" and (stem.startswith("auc_") or stem.startswith("f1_")):
                paths.append(os.path.join(args.dir, fn))
    if not paths:
        print("error: no result tables given", file=sys.stderr)
        return 2
    for path in paths:
        table = read_table_csv(path)
        result = friedman_finner(table)  # MetricError (exit 2) when < 3 methods
        name = os.path.splitext(os.path.basename(path))[0]
        print(f"== {name} ==")
        ranks = average_ranks(table)
        print("avg ranks: " + "  ".join(f"{m}={r:.2f}" for m, r in ranks.items()))
        print(f"Friedman chi2={result.chi2:.4f}  p={result.p:.6g}  control={result.control}")
        for method, z, p_raw, p_adj in result.comparisons:
            print(f"  {result.control} vs {method}: z={z:.4f}  p={p_raw:.6g}  p_finner={p_adj:.6g}")
        print()
    return 0


def cmd_datasets(args) -> int:
    names = args.names.split(",") if args.names else None
    paths = write_benchmark_suite(args.out, seed=args.seed, names=names)
    for p in paths:
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rwmau",
                                     description="Random-walk steered majority undersampling toolkit")
    parser.add_argument("--version", action="version", version=f"rwmau {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resample", help="undersample one dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("auto", "csv", "keel"), default="auto")
    p.add_argument("--method", choices=RESAMPLE_METHODS, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--gamma", type=int, default=10)
    p.add_argument("--walks-per-start", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--dump-scores", action="store_true")
    p.add_argument("--dump-graph", action="store_true")
    p.set_defaults(func=cmd_resample)

    p = sub.add_parser("benchmark", help="run the full evaluation protocol")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--methods", default=",".join(ALL_METHODS))
    p.add_argument("--classifiers", default=",".join(ALL_CLASSIFIERS))
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--walks-per-start", type=int, default=1)
    p.add_argument("--tune-folds", type=int, default=5)
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (env RWMAU_JOBS overrides)")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("report", help="ranks and Friedman/Finner statistics from result csvs")
    p.add_argument("tables", nargs="*")
    p.add_argument("--dir", default=None)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("datasets", help="write synthetic stand-ins for the benchmark suite")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SUITE_SEED)
    p.add_argument("--names", default=None,
                   help="comma-separated subset of: " + ",".join(s.name for s in CATALOG))
    p.set_defaults(func=cmd_datasets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    except RwmauError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
