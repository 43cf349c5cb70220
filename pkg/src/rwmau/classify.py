"""Evaluation classifiers: kNN scores, an entropy-gain binary decision tree,
and bagged trees. All of them emit minority-class probability scores."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ConfigError
from .graph import cross_distances

__all__ = [
    "knn_fit_predict",
    "DecisionTree",
    "BaggedTrees",
    "tree_fit",
    "tree_predict_proba",
    "bagging_fit",
    "bagging_fit_predict",
    "best_split",
    "entropy_bits",
]


def knn_fit_predict(train: Dataset, test_features: np.ndarray, k: int = 5) -> np.ndarray:
    """Minority fraction among the k nearest training rows of each test row.

    Distance ties are broken by ascending training index.
    """
    if train.n < k:
        raise ConfigError(f"need at least k={k} training rows, got {train.n}")
    dists = cross_distances(np.asarray(test_features, dtype=np.float64), train.features)
    nearest = np.argsort(dists, axis=1, kind="stable")[:, :k]
    return train.labels[nearest].sum(axis=1) / k


def entropy_bits(n1, n0):
    """Entropy (bits) of a two-class count pair; vectorized, 0 log 0 = 0."""
    n1 = np.asarray(n1, dtype=np.float64)
    n0 = np.asarray(n0, dtype=np.float64)
    n = n1 + n0

    def xlog2x(c):
        return np.where(c > 0.0, c * np.log2(np.where(c > 0.0, c, 1.0)), 0.0)

    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.log2(np.where(n > 0.0, n, 1.0)) - (xlog2x(n1) + xlog2x(n0)) / np.where(n > 0.0, n, 1.0)
    return h


def _xlog2x(c: np.ndarray) -> np.ndarray:
    return c * np.log2(np.maximum(c, 1.0))  # counts are >= 0, and 1*log2(1) = 0


def best_split(features: np.ndarray, labels: np.ndarray, min_leaf: int = 1):
    """Best binary split by information gain over midpoint thresholds.

    Returns (feature, threshold, gain) or None if no valid split exists.
    Gain ties resolve to the smaller feature index, then smaller threshold.
    """
    m, d = features.shape
    if m < 2 * min_leaf:
        return None
    n1_total = float(labels.sum())
    if n1_total in (0.0, float(m)):
        return None
    parent = float(entropy_bits(n1_total, m - n1_total))

    order = np.argsort(features, axis=0, kind="stable")
    vals = np.take_along_axis(features, order, axis=0)
    left1 = np.cumsum(labels[order], axis=0)[:-1].astype(np.float64)
    nl = np.arange(1, m, dtype=np.float64)[:, None]
    nr = m - nl
    left0 = nl - left1
    right1 = n1_total - left1
    right0 = nr - right1

    # minimizing the summed child entropy (in m*bits) maximizes the gain,
    # so the parent term is only applied to the winner
    child = (_xlog2x(nl) - _xlog2x(left1) - _xlog2x(left0)
             + _xlog2x(nr) - _xlog2x(right1) - _xlog2x(right0))
    invalid = (vals[1:] <= vals[:-1]) | (nl < min_leaf) | (nr < min_leaf)
    child[invalid] = np.inf

    best_rows = child.argmin(axis=0)             # first min = smallest threshold per feature
    best_child = child[best_rows, np.arange(d)]
    feature = int(best_child.argmin())           # first min = smallest feature index
    if not np.isfinite(best_child[feature]):
        return None
    gain = parent - float(best_child[feature]) / m
    if gain <= 0.0:
        return None
    row = int(best_rows[feature])
    threshold = float((vals[row, feature] + vals[row + 1, feature]) / 2.0)
    return feature, threshold, gain


@dataclass
class _Node:
    feature: int = -1
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None
    prob1: float = 0.0
    n_samples: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.left is None


class DecisionTree:
    """Greedy binary tree maximizing entropy gain; rows with feature value
    <= threshold go left. Deterministic for fixed training data."""

    kind = "tree"

    def __init__(self, max_depth: int | None = 25, min_leaf: int = 2):
        if max_depth is not None and max_depth < 0:
            raise ConfigError("max_depth must be >= 0")
        if min_leaf < 1:
            raise ConfigError("min_leaf must be >= 1")
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.root: _Node | None = None

    def fit(self, train: Dataset) -> "DecisionTree":
        self.root = self._grow(train.features, train.labels, depth=0)
        return self

    def _grow(self, features: np.ndarray, labels: np.ndarray, depth: int) -> _Node:
        m = labels.shape[0]
        n1 = int(labels.sum())
        node = _Node(prob1=n1 / m, n_samples=m)
        if n1 in (0, m):
            return node
        if self.max_depth is not None and depth >= self.max_depth:
            return node
        split = best_split(features, labels, self.min_leaf)
        if split is None:
            return node
        node.feature, node.threshold, _ = split
        mask = features[:, node.feature] <= node.threshold
        node.left = self._grow(features[mask], labels[mask], depth + 1)
        node.right = self._grow(features[~mask], labels[~mask], depth + 1)
        return node

    def predict_proba(self, test_features: np.ndarray) -> np.ndarray:
        if self.root is None:
            raise ConfigError("tree is not fitted")
        x = np.asarray(test_features, dtype=np.float64)
        out = np.empty(x.shape[0], dtype=np.float64)
        self._route(self.root, x, np.arange(x.shape[0]), out)
        return out

    def _route(self, node: _Node, x: np.ndarray, idx: np.ndarray, out: np.ndarray) -> None:
        if node.is_leaf:
            out[idx] = node.prob1
            return
        mask = x[idx, node.feature] <= node.threshold
        self._route(node.left, x, idx[mask], out)
        self._route(node.right, x, idx[~mask], out)

    def depth(self) -> int:
        def walk(node, d):
            if node is None or node.is_leaf:
                return d
            return max(walk(node.left, d + 1), walk(node.right, d + 1))
        return walk(self.root, 0)


def tree_fit(train: Dataset, max_depth: int | None = 25, min_leaf: int = 2) -> DecisionTree:
    if train.n < 1:
        raise ConfigError("empty training set")
    return DecisionTree(max_depth=max_depth, min_leaf=min_leaf).fit(train)


def tree_predict_proba(model: DecisionTree, test_features: np.ndarray) -> np.ndarray:
    return model.predict_proba(test_features)


class BaggedTrees:
    """Bootstrap ensemble of decision trees; score = mean member probability."""

    kind = "bagging"

    def __init__(self, trees: list[DecisionTree]):
        self.trees = trees

    def predict_proba(self, test_features: np.ndarray) -> np.ndarray:
        member = np.stack([t.predict_proba(test_features) for t in self.trees])
        return member.mean(axis=0)


def bagging_fit(train: Dataset, n_estimators: int = 10, seed: int = 0,
                bootstrap: bool = True, max_depth: int | None = 25, min_leaf: int = 2) -> BaggedTrees:
    """Fit n_estimators trees on seeded bootstrap resamples of the training
    set (bootstrap=False refits every member on the full data)."""
    if n_estimators < 1:
        raise ConfigError("n_estimators must be >= 1")
    trees = []
    for member in range(n_estimators):
        if bootstrap:
            rng = np.random.default_rng((seed, member))
            rows = rng.integers(0, train.n, size=train.n)
            sample = train.subset(rows)
        else:
            sample = train
        trees.append(tree_fit(sample, max_depth=max_depth, min_leaf=min_leaf))
    return BaggedTrees(trees)


def bagging_fit_predict(train: Dataset, test_features: np.ndarray, n_estimators: int = 10,
                        seed: int = 0, bootstrap: bool = True) -> np.ndarray:
    return bagging_fit(train, n_estimators, seed, bootstrap).predict_proba(test_features)
