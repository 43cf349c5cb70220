"""Benchmark suite definitions and a seeded synthetic stand-in generator.

The catalog mirrors the 21 KEEL imbalanced binary datasets (name, size,
dimensionality, imbalance ratio as published on the KEEL repository page).
The generator produces stand-ins with exactly those shapes and class
counts: compact minority clusters, a diffuse majority bulk, and a majority
"halo" encroaching on the minority clusters so that undersampling the
encroachers genuinely matters. Point the benchmark at real KEEL files
instead whenever they are available; the file format is identical.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .seeding import derive_seed

__all__ = ["StandinSpec", "CATALOG", "catalog_by_name", "make_standin", "write_keel", "write_benchmark_suite"]

DEFAULT_SUITE_SEED = 20210907

# fraction of majority points placed in the encroaching halo, and the local
# halo-to-minority density ratio the halo width is solved for
_HALO_WEIGHT = 0.35
_HALO_DENSITY_RATIO = 2.0
_MINORITY_SIGMA = 0.5
_BULK_SIGMA = 2.0
_CENTER_SIGMA = 2.0


@dataclass(frozen=True)
class StandinSpec:
    name: str
    n: int
    d: int
    imbalance_ratio: float

    @property
    def n_minority(self) -> int:
        return round(self.n / (1.0 + self.imbalance_ratio))

    @property
    def n_majority(self) -> int:
        return self.n - self.n_minority


CATALOG: tuple[StandinSpec, ...] = (
    StandinSpec("yeast5", 1484, 8, 32.73),
    StandinSpec("yeast1289v7", 947, 8, 30.57),
    StandinSpec("wine-red-4", 1599, 11, 29.17),
    StandinSpec("yeast4", 1484, 8, 28.10),
    StandinSpec("yeast1458v7", 693, 8, 22.10),
    StandinSpec("abalone9-18", 731, 8, 16.40),
    StandinSpec("ecoli4", 336, 7, 15.80),
    StandinSpec("led02456789v1", 443, 7, 10.97),
    StandinSpec("page-blocks0", 5472, 10, 8.79),
    StandinSpec("ecoli3", 336, 7, 8.60),
    StandinSpec("yeast3", 1484, 8, 8.10),
    StandinSpec("new-thyroid1", 215, 5, 5.14),
    StandinSpec("new-thyroid2", 215, 5, 5.14),
    StandinSpec("vehicle3", 846, 18, 2.99),
    StandinSpec("vehicle1", 846, 18, 2.90),
    StandinSpec("vehicle2", 846, 18, 2.88),
    StandinSpec("glass0", 214, 9, 2.06),
    StandinSpec("pima", 768, 8, 1.87),
    StandinSpec("glass1", 214, 9, 1.82),
    StandinSpec("wdbc", 569, 30, 1.68),
    StandinSpec("spam", 4597, 57, 1.54),
)


def catalog_by_name(name: str) -> StandinSpec:
    for spec in CATALOG:
        if spec.name == name:
            return spec
    raise KeyError(name)


def make_standin(spec: StandinSpec, seed: int = DEFAULT_SUITE_SEED) -> Dataset:
    """Synthetic imbalanced dataset with the catalog shape and class counts."""
    rng = np.random.default_rng((seed, derive_seed(spec.name)))
    n_min, n_maj, d = spec.n_minority, spec.n_majority, spec.d
    d_noise = d // 4
    d_inf = d - d_noise

    n_clusters = 1 + int(derive_seed(spec.name, "clusters") % 2)
    n_clusters = min(n_clusters, max(1, n_min // 8))
    centers = rng.normal(0.0, _CENTER_SIGMA, size=(n_clusters, d_inf))

    n_halo = int(round(_HALO_WEIGHT * n_maj))
    # halo width solved so the halo is locally ~_HALO_DENSITY_RATIO times as
    # dense as the minority cluster it surrounds
    ratio = max((n_halo / max(n_min, 1)) / _HALO_DENSITY_RATIO, 1.0)
    halo_sigma = _MINORITY_SIGMA * ratio ** (1.0 / d_inf)

    def cluster_points(count, sigma):
        assign = rng.integers(0, n_clusters, size=count)
        return centers[assign] + rng.normal(0.0, sigma, size=(count, d_inf))

    x_min = cluster_points(n_min, _MINORITY_SIGMA)
    x_halo = cluster_points(n_halo, halo_sigma)
    x_bulk = rng.normal(0.0, _BULK_SIGMA, size=(n_maj - n_halo, d_inf))

    informative = np.vstack([x_min, x_halo, x_bulk])
    if d_noise:
        noise = rng.normal(0.0, 1.0, size=(spec.n, d_noise))
        features = np.hstack([informative, noise])
    else:
        features = informative
    labels = np.concatenate([np.ones(n_min, dtype=np.int64), np.zeros(n_maj, dtype=np.int64)])

    perm = rng.permutation(spec.n)
    names = tuple(f"f{j + 1}" for j in range(d))
    return Dataset(features[perm], labels[perm], names,
                   {"negative": 0, "positive": 1})


def write_keel(ds: Dataset, path: str, relation: str) -> None:
    """Write a Dataset in KEEL header + csv-data format.

    Feature values use shortest round-trip form; labels are written through
    the dataset's original label strings.
    """
    inverse = {v: k for k, v in ds.source_label_map.items()}
    names = list(ds.names) if ds.names is not None else [f"f{j + 1}" for j in range(ds.d)]
    lines = [f"@relation {relation}"]
    for j, name in enumerate(names):
        lo, hi = ds.features[:, j].min(), ds.features[:, j].max()
        lines.append(f"@attribute {name} real [{lo:.6g}, {hi:.6g}]")
    class_values = ", ".join(sorted(ds.source_label_map))
    lines.append(f"@attribute class {{{class_values}}}")
    lines.append("@inputs " + ", ".join(names))
    lines.append("@outputs class")
    lines.append("@data")
    for i in range(ds.n):
        row = [repr(float(v)) for v in ds.features[i]]
        row.append(inverse[int(ds.labels[i])])
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_benchmark_suite(out_dir: str, seed: int = DEFAULT_SUITE_SEED,
                          names: list[str] | None = None) -> list[str]:
    """Materialize stand-in .dat files for the whole catalog (or a subset)."""
    os.makedirs(out_dir, exist_ok=True)
    wanted = set(names) if names is not None else None
    paths = []
    for spec in CATALOG:
        if wanted is not None and spec.name not in wanted:
            continue
        ds = make_standin(spec, seed)
        path = os.path.join(out_dir, f"{spec.name}.dat")
        write_keel(ds, path, relation=spec.name)
        paths.append(path)
    return paths
