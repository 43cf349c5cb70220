"""Benchmark harness: shared splits, per-repetition tuning, resampling,
classification and metric aggregation across a directory of datasets.

Every random stream is derived from (seed, dataset name, repetition,
stage), so results are independent of scheduling and process count.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np

from . import __version__
from .classify import bagging_fit_predict, knn_fit_predict, tree_fit
from .data import Dataset, SplitSpec, load_dataset, random_split_indices, standardize
from .errors import RwmauError
from .metrics import MethodResultTable, FriedmanResult, auc, f1_minority, friedman_finner, write_table_csv
from .resample import ResampleConfig, apply_method
from .seeding import derive_seed
from .tuning import TuneGrid, tune_detailed

__all__ = ["BenchmarkConfig", "BenchmarkReport", "DatasetFile", "discover_datasets",
           "run_benchmark", "render_report", "write_report_files", "resolve_jobs"]

JOBS_ENV_VAR = "RWMAU_JOBS"

METRICS = ("auc", "f1")

# how a method is labeled in result tables
METHOD_LABELS = {"none": "original"}


@dataclass(frozen=True)
class BenchmarkConfig:
    methods: tuple[str, ...] = ("rwmau", "none", "rus", "cc", "ncr")
    classifiers: tuple[str, ...] = ("knn", "tree", "bagging")
    repetitions: int = 10
    seed: int = 0
    alpha: float = 0.5
    train_fraction: float = 0.8
    standardize: bool = False
    walks_per_start: int = 1
    tune_folds: int = 5
    k_values: tuple[int, ...] = tuple(range(2, 11))
    gamma_offsets: tuple[int, ...] = tuple(range(-3, 4))
    tune_trace: bool = False


@dataclass(frozen=True)
class DatasetFile:
    name: str
    path: str
    format: str


@dataclass
class BenchmarkReport:
    # (metric, classifier) -> datasets x methods table of repetition means
    tables: dict[tuple[str, str], MethodResultTable]
    stats: dict[tuple[str, str], FriedmanResult | None]
    tuned: dict[tuple[str, int], tuple[int, int] | None]
    failures: list[tuple[str, str]]
    timings: dict[str, float] = field(default_factory=dict)
    # (dataset, rep, k, gamma, fold, auc) rows, present when tracing is on
    tune_trace: list[tuple] = field(default_factory=list)


def discover_datasets(data_dir: str) -> list[DatasetFile]:
    """Dataset files in a directory, sorted by filename."""
    entries = []
    for fn in sorted(os.listdir(data_dir)):
        stem, ext = os.path.splitext(fn)
        ext = ext.lower()
        if ext == ".csv":
            entries.append(DatasetFile(stem, os.path.join(data_dir, fn), "csv"))
        elif ext in (".dat", ".keel"):
            entries.append(DatasetFile(stem, os.path.join(data_dir, fn), "keel"))
    return entries


_DATASET_CACHE: dict[tuple[str, str], Dataset] = {}


def _load_cached(path: str, fmt: str) -> Dataset:
    key = (path, fmt)
    if key not in _DATASET_CACHE:
        _DATASET_CACHE[key] = load_dataset(path, fmt)
    return _DATASET_CACHE[key]


def _classifier_scores(name: str, train: Dataset, test_features: np.ndarray, seed: int) -> np.ndarray:
    if name == "knn":
        return knn_fit_predict(train, test_features, k=5)
    if name == "tree":
        return tree_fit(train).predict_proba(test_features)
    if name == "bagging":
        return bagging_fit_predict(train, test_features, n_estimators=10, seed=seed)
    raise RwmauError(f"unknown classifier {name!r}")


def _run_cell(job) -> dict:
    """One (dataset, repetition) unit: split, tune, resample, classify."""
    file, rep, cfg = job
    out = {"dataset": file.name, "rep": rep, "cells": {}, "tuned": None,
           "error": None, "timings": {}, "tune_trace": []}
    try:
        ds = _load_cached(file.path, file.format)
        split_spec = SplitSpec(cfg.train_fraction, cfg.repetitions,
                               derive_seed(cfg.seed, file.name, "split"))
        train_idx, test_idx = random_split_indices(ds, split_spec, rep)
        assert not np.intersect1d(train_idx, test_idx).size
        train, test = ds.subset(train_idx), ds.subset(test_idx)
        if cfg.standardize:
            train, scaler = standardize(train)
            test = test.replace(scaler.apply(test.features), test.labels.copy())

        tuned = None
        if "rwmau" in cfg.methods:
            t0 = time.perf_counter()
            grid = TuneGrid(k_values=cfg.k_values, gamma_offsets=cfg.gamma_offsets,
                            folds=cfg.tune_folds, seed=derive_seed(cfg.seed, file.name, rep, "tune"))
            tuned, trace = tune_detailed(train, grid, cfg.alpha)
            if cfg.tune_trace:
                out["tune_trace"] = [(file.name, rep, *row) for row in trace]
            out["timings"]["tune"] = time.perf_counter() - t0
        out["tuned"] = tuned

        for method in cfg.methods:
            t0 = time.perf_counter()
            k, gamma = tuned if tuned is not None else (5, 10)
            rcfg = ResampleConfig(alpha=cfg.alpha, k=k, gamma=gamma,
                                  walks_per_start=cfg.walks_per_start,
                                  seed=derive_seed(cfg.seed, file.name, rep, method),
                                  method=method)
            augmented = apply_method(train, rcfg).augmented
            out["timings"]["resample"] = out["timings"].get("resample", 0.0) + time.perf_counter() - t0

            t0 = time.perf_counter()
            for clf in cfg.classifiers:
                scores = _classifier_scores(clf, augmented, test.features,
                                            derive_seed(cfg.seed, file.name, rep, method, clf))
                out["cells"][(method, clf)] = (auc(scores, test.labels),
                                               f1_minority(scores, test.labels))
            out["timings"]["classify"] = out["timings"].get("classify", 0.0) + time.perf_counter() - t0
    except (RwmauError, AssertionError) as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def resolve_jobs(requested: int | None) -> int:
    env = os.environ.get(JOBS_ENV_VAR)
    if env:
        return max(1, int(env))
    if requested:
        return max(1, requested)
    return os.cpu_count() or 1


def run_benchmark(files: list[DatasetFile], cfg: BenchmarkConfig,
                  jobs: int | None = None) -> BenchmarkReport:
    """Full methods x classifiers sweep over the given dataset files."""
    started = time.perf_counter()
    jobs_n = resolve_jobs(jobs)
    work = [(f, rep, cfg) for f in files for rep in range(cfg.repetitions)]
    if jobs_n > 1 and len(work) > 1:
        with Pool(processes=min(jobs_n, len(work))) as pool:
            results = pool.map(_run_cell, work, chunksize=1)
    else:
        results = [_run_cell(job) for job in work]

    failures: list[tuple[str, str]] = []
    failed_names = set()
    for res in results:
        if res["error"] is not None:
            failures.append((res["dataset"], f"rep {res['rep']}: {res['error']}"))
            failed_names.add(res["dataset"])

    names = [f.name for f in files if f.name not in failed_names]
    method_labels = [METHOD_LABELS.get(m, m) for m in cfg.methods]

    by_cell: dict = {}
    tuned: dict = {}
    stage_totals: dict[str, float] = {}
    trace_rows: list[tuple] = []
    for res in results:
        tuned[(res["dataset"], res["rep"])] = res["tuned"]
        trace_rows.extend(res["tune_trace"])
        for stage, secs in res["timings"].items():
            stage_totals[stage] = stage_totals.get(stage, 0.0) + secs
        if res["dataset"] in failed_names:
            continue
        for (method, clf), (auc_v, f1_v) in res["cells"].items():
            by_cell.setdefault((res["dataset"], method, clf), []).append((res["rep"], auc_v, f1_v))

    tables = {}
    stats = {}
    for metric_i, metric in enumerate(METRICS):
        for clf in cfg.classifiers:
            values = np.empty((len(names), len(cfg.methods)))
            for i, name in enumerate(names):
                for j, method in enumerate(cfg.methods):
                    reps = sorted(by_cell[(name, method, clf)])
                    values[i, j] = float(np.mean([r[1 + metric_i] for r in reps]))
            table = MethodResultTable(tuple(names), tuple(method_labels), values)
            tables[(metric, clf)] = table
            stats[(metric, clf)] = (friedman_finner(table) if len(cfg.methods) >= 3 and len(names) >= 2
                                    else None)
    stage_totals["total_wall"] = time.perf_counter() - started
    return BenchmarkReport(tables=tables, stats=stats, tuned=tuned,
                           failures=failures, timings=stage_totals, tune_trace=trace_rows)


def render_report(report: BenchmarkReport) -> str:
    """Human-readable ranks and test statistics."""
    lines = []
    for (metric, clf), table in report.tables.items():
        lines.append(f"== {metric.upper()} / {clf} ==")
        result = report.stats[(metric, clf)]
        if result is None:
            from .metrics import average_ranks
            ranks = average_ranks(table) if len(table.methods) >= 2 else {}
            lines.append("avg ranks: " + "  ".join(f"{m}={r:.2f}" for m, r in ranks.items()))
            lines.append("(Friedman test skipped: needs >= 3 methods and >= 2 datasets)")
        else:
            lines.append("avg ranks: " + "  ".join(f"{m}={r:.2f}" for m, r in result.avg_ranks.items()))
            lines.append(f"Friedman chi2={result.chi2:.4f}  p={result.p:.6g}  control={result.control}")
            for method, z, p_raw, p_adj in result.comparisons:
                lines.append(f"  {result.control} vs {method}: z={z:.4f}  p={p_raw:.6g}  p_finner={p_adj:.6g}")
        lines.append("")
    if report.failures:
        lines.append("failed datasets:")
        for name, msg in report.failures:
            lines.append(f"  {name}: {msg}")
        lines.append("")
    return "\n".join(lines)


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(files: list[DatasetFile], cfg: BenchmarkConfig, jobs: int,
                   report: BenchmarkReport) -> dict:
    return {
        "tool": "rwmau",
        "version": __version__,
        "command": "benchmark",
        "seed": cfg.seed,
        "config": {
            "methods": list(cfg.methods),
            "classifiers": list(cfg.classifiers),
            "repetitions": cfg.repetitions,
            "alpha": cfg.alpha,
            "train_fraction": cfg.train_fraction,
            "standardize": cfg.standardize,
            "walks_per_start": cfg.walks_per_start,
            "tune_folds": cfg.tune_folds,
            "k_values": list(cfg.k_values),
            "gamma_offsets": list(cfg.gamma_offsets),
            "jobs": jobs,
        },
        "datasets": [
            {"name": f.name, "path": os.path.abspath(f.path), "format": f.format,
             "sha256": _sha256(f.path)}
            for f in files
        ],
        "timings_seconds": {k: round(v, 3) for k, v in report.timings.items()},
        "failures": [{"dataset": d, "detail": m} for d, m in report.failures],
    }


def write_report_files(report: BenchmarkReport, out_dir: str, manifest: dict) -> list[str]:
    """Result csvs (one per metric/classifier), ranks + stats csv, text
    report and the run manifest."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for (metric, clf), table in report.tables.items():
        path = os.path.join(out_dir, f"{metric}_{clf}.csv")
        write_table_csv(table, path)
        written.append(path)

    ranks_path = os.path.join(out_dir, "ranks.csv")
    with open(ranks_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("metric,classifier,method,avg_rank\n")
        for (metric, clf), result in report.stats.items():
            if result is None:
                continue
            for method, rank in result.avg_ranks.items():
                fh.write(f"{metric},{clf},{method},{rank:.4f}\n")
    written.append(ranks_path)

    stats_path = os.path.join(out_dir, "stats.csv")
    with open(stats_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("metric,classifier,chi2,p,control,method,z,p_raw,p_finner\n")
        for (metric, clf), result in report.stats.items():
            if result is None:
                continue
            for method, z, p_raw, p_adj in result.comparisons:
                fh.write(f"{metric},{clf},{result.chi2:.6g},{result.p:.6g},{result.control},"
                         f"{method},{z:.6g},{p_raw:.6g},{p_adj:.6g}\n")
    written.append(stats_path)

    text_path = os.path.join(out_dir, "report.txt")
    with open(text_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_report(report))
    written.append(text_path)

    manifest_path = os.path.join(out_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(manifest_path)
    return written
