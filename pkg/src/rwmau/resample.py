"""Majority undersamplers: random-walk steered (rwmau), random (rus),
cluster centroids (cc) and the neighbourhood cleaning rule (ncr).

rwmau and rus remove exactly u = floor((n_maj - n_min) * alpha) majority
rows; cc replaces the majority class by n_maj - u k-means centroids; ncr
removes a data-driven set of majority rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ConfigError
from .graph import cross_distances, neighbor_order, pairwise_distances, transition_probabilities
from .walk import ScoreVector, WalkConfig, proximity_scores

__all__ = [
    "ResampleConfig",
    "ResampleResult",
    "undersample_count",
    "rwmau_undersample",
    "random_undersample",
    "cluster_centroid_undersample",
    "ncr_clean",
    "apply_method",
]

METHODS = ("rwmau", "rus", "cc", "ncr", "none")

# distinct substream for filling the removal budget from zero-score points
_ZERO_FILL_STREAM = 7919

_KMEANS_MAX_ITER = 300
_KMEANS_TOL = 1e-6


@dataclass(frozen=True)
class ResampleConfig:
    """Everything an undersampling run consumes."""

    alpha: float
    k: int = 5
    gamma: int = 10
    walks_per_start: int = 1
    seed: int = 0
    method: str = "rwmau"

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in (0,1], got {self.alpha}")
        if self.k < 1:
            raise ConfigError("k must be positive")
        if self.gamma < 1:
            raise ConfigError("gamma must be >= 1")
        if self.walks_per_start < 1:
            raise ConfigError("walks_per_start must be >= 1")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}, expected one of {METHODS}")


@dataclass(frozen=True)
class ResampleResult:
    """Augmented dataset, the original majority indices that were dropped,
    and (for rwmau) the proximity scores that drove the selection."""

    augmented: Dataset
    removed_indices: np.ndarray
    scores: ScoreVector | None = None


def undersample_count(n_maj: int, n_min: int, alpha: float) -> int:
    """Removal budget floor((n_maj - n_min) * alpha)."""
    if n_maj < n_min:
        raise ConfigError(f"majority count {n_maj} smaller than minority count {n_min}")
    return math.floor((n_maj - n_min) * alpha)


def _drop_rows(ds: Dataset, removed: np.ndarray) -> Dataset:
    keep = np.setdiff1d(np.arange(ds.n), removed)
    return ds.subset(keep)


def rwmau_undersample(ds: Dataset, cfg: ResampleConfig, *, geometry=None) -> ResampleResult:
    """Remove the u majority rows closest to the minority class under
    random-walk proximity.

    Builds the kNN transition graph over all rows, scores majority rows by
    walks started from every minority row, and removes the u highest-scoring
    ones (score ties at the cutoff: smaller original index goes first). If
    fewer than u rows score above zero, the shortfall is drawn uniformly
    from the zero-score majority rows.

    `geometry` may carry a precomputed (distance matrix, neighbor_order)
    pair so several configurations can share the expensive part.
    """
    minority = ds.minority_indices
    majority = ds.majority_indices
    if minority.size < 1:
        raise ConfigError("dataset has no minority rows")
    if cfg.k > ds.n - 1:
        raise ConfigError(f"k={cfg.k} too large for n={ds.n}")
    u = undersample_count(majority.size, minority.size, cfg.alpha)

    if geometry is None:
        dm = pairwise_distances(ds.features)
        order = neighbor_order(dm)
    else:
        dm, order = geometry
    g = transition_probabilities(dm, order[:, :cfg.k], cfg.k)
    sv = proximity_scores(g, minority, majority,
                          WalkConfig(cfg.gamma, cfg.walks_per_start, cfg.seed))

    removed = _select_by_score(sv, majority, u, cfg.seed)
    return ResampleResult(_drop_rows(ds, removed), removed, sv)


def _select_by_score(sv: ScoreVector, majority: np.ndarray, u: int, seed: int) -> np.ndarray:
    scores = np.asarray([sv.nu[int(i)] for i in majority])
    by_score = majority[np.lexsort((majority, -scores))]  # descending score, then ascending index
    n_positive = int((scores > 0.0).sum())
    if n_positive >= u:
        removed = by_score[:u]
    else:
        rng = np.random.default_rng((seed, _ZERO_FILL_STREAM))
        zeros = np.sort(by_score[n_positive:])
        fill = rng.choice(zeros, size=u - n_positive, replace=False)
        removed = np.concatenate([by_score[:n_positive], fill])
    return np.sort(removed.astype(np.int64))


def random_undersample(ds: Dataset, alpha: float, seed: int = 0) -> ResampleResult:
    """Remove u uniformly random majority rows (without replacement)."""
    if not 0.0 < alpha <= 1.0:
        raise ConfigError(f"alpha must be in (0,1], got {alpha}")
    majority = ds.majority_indices
    u = undersample_count(majority.size, ds.n_minority, alpha)
    rng = np.random.default_rng(seed)
    removed = np.sort(rng.choice(majority, size=u, replace=False).astype(np.int64))
    return ResampleResult(_drop_rows(ds, removed), removed)


def _kmeans(points: np.ndarray, n_centers: int, seed: int) -> np.ndarray:
    """Lloyd's k-means; seeded init from distinct rows, empty clusters
    reseeded from the point farthest from its current center."""
    rng = np.random.default_rng(seed)
    n = points.shape[0]
    centers = points[rng.choice(n, size=n_centers, replace=False)].copy()
    for _ in range(_KMEANS_MAX_ITER):
        dists = cross_distances(points, centers)
        assign = dists.argmin(axis=1)
        counts = np.bincount(assign, minlength=n_centers)
        empties = np.flatnonzero(counts == 0)
        if empties.size:
            own = dists[np.arange(n), assign].copy()
            for c in empties:
                far = int(own.argmax())
                centers[c] = points[far]
                own[far] = -1.0
            dists = cross_distances(points, centers)
            assign = dists.argmin(axis=1)
            counts = np.bincount(assign, minlength=n_centers)
        new_centers = np.zeros_like(centers)
        np.add.at(new_centers, assign, points)
        new_centers /= np.maximum(counts, 1)[:, None]
        still_empty = counts == 0
        if still_empty.any():
            new_centers[still_empty] = centers[still_empty]
        shift = np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max()
        centers = new_centers
        if shift <= _KMEANS_TOL:
            break
    return centers


def cluster_centroid_undersample(ds: Dataset, alpha: float, seed: int = 0) -> ResampleResult:
    """Replace the majority class by n_maj - u k-means centroids.

    The augmented dataset holds the untouched minority rows (original
    relative order) followed by the synthetic centroid rows; every original
    majority row is reported as removed.
    """
    if not 0.0 < alpha <= 1.0:
        raise ConfigError(f"alpha must be in (0,1], got {alpha}")
    minority = ds.minority_indices
    majority = ds.majority_indices
    u = undersample_count(majority.size, minority.size, alpha)
    m_prime = majority.size - u
    centers = _kmeans(ds.features[majority], m_prime, seed)
    features = np.vstack([ds.features[minority], centers])
    labels = np.concatenate([np.ones(minority.size, dtype=np.int64),
                             np.zeros(m_prime, dtype=np.int64)])
    return ResampleResult(ds.replace(features, labels), np.sort(majority.astype(np.int64)))


def ncr_clean(ds: Dataset, k_ncr: int = 3) -> ResampleResult:
    """Neighbourhood cleaning: drop majority rows outvoted by their k_ncr
    nearest neighbours, plus the majority neighbours of any minority row
    that its neighbourhood misclassifies. Minority rows are never removed."""
    if ds.n <= k_ncr:
        raise ConfigError(f"need more than k_ncr={k_ncr} rows, got {ds.n}")
    dm = pairwise_distances(ds.features)
    neighbors = neighbor_order(dm)[:, :k_ncr]
    votes = ds.labels[neighbors].sum(axis=1)
    predicted = (2 * votes > k_ncr).astype(np.int64)  # even-k ties go to the majority class

    misclassified = predicted != ds.labels
    removed = set(np.flatnonzero(misclassified & (ds.labels == 0)).tolist())
    for i in np.flatnonzero(misclassified & (ds.labels == 1)):
        for j in neighbors[i]:
            if ds.labels[j] == 0:
                removed.add(int(j))
    removed = np.asarray(sorted(removed), dtype=np.int64)
    return ResampleResult(_drop_rows(ds, removed), removed)


def apply_method(ds: Dataset, cfg: ResampleConfig) -> ResampleResult:
    """Dispatch on cfg.method; 'none' returns the dataset unchanged."""
    if cfg.method == "rwmau":
        return rwmau_undersample(ds, cfg)
    if cfg.method == "rus":
        return random_undersample(ds, cfg.alpha, cfg.seed)
    if cfg.method == "cc":
        return cluster_centroid_undersample(ds, cfg.alpha, cfg.seed)
    if cfg.method == "ncr":
        return ncr_clean(ds)
    return ResampleResult(ds, np.empty(0, dtype=np.int64))
