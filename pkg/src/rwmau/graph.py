"""Directed weighted kNN graph over a point set.

Each node points at its k nearest neighbours; the edge weight toward a
neighbour decays exponentially with its distance relative to the kth
neighbour distance, normalized so every node's outgoing weights sum to 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "TransitionGraph",
    "pairwise_distances",
    "cross_distances",
    "neighbor_order",
    "knn_neighbors",
    "transition_probabilities",
    "build_graph",
    "dump_edges",
]

# scratch elements per distance block; bounds peak memory at ~64 MB
_BLOCK_ELEMS = 8_000_000


@dataclass(frozen=True)
class TransitionGraph:
    """Per-node neighbour lists with outgoing transition probabilities.

    neighbors: (n, k) int matrix, row i sorted by ascending distance from i
               (ties by ascending node index), i itself excluded.
    probs:     (n, k) matrix, rows sum to 1.
    """

    neighbors: np.ndarray
    probs: np.ndarray
    k: int

    @property
    def n(self) -> int:
        return self.neighbors.shape[0]

    def cumulative_probs(self) -> np.ndarray:
        return np.cumsum(self.probs, axis=1)


def pairwise_distances(features: np.ndarray) -> np.ndarray:
    """Exact Euclidean distance matrix (symmetric, zero diagonal).

    Computed blockwise from explicit coordinate differences in double
    precision, so results do not depend on block size.
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ConfigError("need a 2-d matrix with at least 2 rows")
    n = x.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    block = max(1, _BLOCK_ELEMS // (n * x.shape[1]))
    for start in range(0, n, block):
        stop = min(start + block, n)
        diff = x[start:stop, None, :] - x[None, :, :]
        np.sqrt(np.einsum("ijk,ijk->ij", diff, diff), out=out[start:stop])
    np.fill_diagonal(out, 0.0)
    return out


def cross_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact Euclidean distances between two point sets, shape (len(a), len(b))."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = np.empty((a.shape[0], b.shape[0]), dtype=np.float64)
    block = max(1, _BLOCK_ELEMS // max(1, b.shape[0] * b.shape[1]))
    for start in range(0, a.shape[0], block):
        stop = min(start + block, a.shape[0])
        diff = a[start:stop, None, :] - b[None, :, :]
        np.sqrt(np.einsum("ijk,ijk->ij", diff, diff), out=out[start:stop])
    return out


def neighbor_order(dm: np.ndarray) -> np.ndarray:
    """All other nodes per row, ascending distance, ties by ascending index.

    Shape (n, n-1); column c holds each node's (c+1)-th nearest neighbour.
    Useful for slicing neighbour lists for several k without re-sorting.
    """
    n = dm.shape[0]
    order = np.argsort(dm, axis=1, kind="stable")
    keep = order != np.arange(n)[:, None]
    return order[keep].reshape(n, n - 1)


def knn_neighbors(dm: np.ndarray, k: int) -> np.ndarray:
    """(n, k) nearest-neighbour index lists (self excluded)."""
    n = dm.shape[0]
    if k < 1:
        raise ConfigError("k must be positive")
    if k >= n:
        raise ConfigError(f"k={k} needs at least k+1={k + 1} points, got {n}")
    return neighbor_order(dm)[:, :k]


def transition_probabilities(dm: np.ndarray, neighbors: np.ndarray, k: int) -> TransitionGraph:
    """Outgoing probabilities from neighbour distances.

    p(i, j) = exp(-d_ij / d_ik) normalized over the k neighbours, where d_ik
    is the distance to i's kth neighbour. Rows with d_ik = 0 (all neighbours
    coincide with i) fall back to the uniform limit 1/k.
    """
    if neighbors.shape[1] != k:
        raise ConfigError("neighbor lists do not match k")
    ndist = np.take_along_axis(dm, neighbors, axis=1)
    dk = ndist[:, -1:]
    zero = dk[:, 0] == 0.0
    safe_dk = np.where(zero[:, None], 1.0, dk)
    w = np.exp(-ndist / safe_dk)
    w[zero] = 1.0
    probs = w / w.sum(axis=1, keepdims=True)
    return TransitionGraph(neighbors=np.ascontiguousarray(neighbors), probs=probs, k=k)


def build_graph(features: np.ndarray, k: int) -> TransitionGraph:
    """Distance matrix + kNN lists + probabilities in one call."""
    dm = pairwise_distances(features)
    return transition_probabilities(dm, knn_neighbors(dm, k), k)


def dump_edges(g: TransitionGraph) -> str:
    """Edge list as text: 'src dst prob' per line, 12 significant digits."""
    lines = []
    for i in range(g.n):
        for j in range(g.k):
            lines.append(f"{i} {g.neighbors[i, j]} {g.probs[i, j]:.12g}")
    return "\n".join(lines) + "\n"
