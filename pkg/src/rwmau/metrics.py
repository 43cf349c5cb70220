"""Evaluation metrics and rank statistics: AUC (rank form), minority F1,
average ranks over result tables, and the Friedman test with Finner
step-down correction against the best-ranked method."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, MetricError

__all__ = [
    "MethodResultTable",
    "FriedmanResult",
    "auc",
    "f1_minority",
    "rank_row",
    "average_ranks",
    "finner_adjust",
    "friedman_finner",
    "chi2_sf",
    "normal_sf",
    "write_table_csv",
    "read_table_csv",
]


@dataclass(frozen=True)
class MethodResultTable:
    """Datasets x methods matrix of mean metric values."""

    datasets: tuple[str, ...]
    methods: tuple[str, ...]
    values: np.ndarray  # (len(datasets), len(methods))

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (len(self.datasets), len(self.methods)):
            raise FormatError("table shape does not match dataset/method labels")
        if not np.isfinite(values).all():
            raise FormatError("table has missing cells")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(self, "methods", tuple(self.methods))


@dataclass(frozen=True)
class FriedmanResult:
    chi2: float
    p: float
    control: str
    avg_ranks: dict[str, float]
    # per non-control method: (name, z, raw p, Finner-adjusted p)
    comparisons: tuple[tuple[str, float, float, float], ...]


def _rankdata_average(values: np.ndarray) -> np.ndarray:
    """Ascending ranks starting at 1; ties share the average rank."""
    uniq, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    upper = np.cumsum(counts)
    return upper[inverse] - (counts[inverse] - 1) / 2.0


def auc(scores, labels) -> float:
    """Probability that a random minority score exceeds a random majority
    score, ties counted half (Mann-Whitney formulation)."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    n1 = int((labels == 1).sum())
    n0 = int((labels == 0).sum())
    if n1 == 0 or n0 == 0:
        raise MetricError("AUC needs both classes present")
    ranks = _rankdata_average(scores)
    u1 = ranks[labels == 1].sum() - n1 * (n1 + 1) / 2.0
    return u1 / (n1 * n0)


def f1_minority(scores, labels, threshold: float = 0.5) -> float:
    """F1 of the minority class, predicting minority where score >= threshold."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    predicted = scores >= threshold
    actual = labels == 1
    tp = int((predicted & actual).sum())
    if tp == 0:
        return 0.0
    precision = tp / int(predicted.sum())
    recall = tp / int(actual.sum())
    return 2.0 * precision * recall / (precision + recall)


def rank_row(values: np.ndarray, higher_is_better: bool = True) -> np.ndarray:
    """Ranks 1..m (1 = best) with average-rank tie handling."""
    values = np.asarray(values, dtype=np.float64)
    return _rankdata_average(-values if higher_is_better else values)


def average_ranks(table: MethodResultTable, higher_is_better: bool = True) -> dict[str, float]:
    """Mean per-dataset rank of each method (1 = best)."""
    if len(table.methods) < 2:
        raise MetricError("ranking needs at least 2 methods")
    ranks = np.vstack([rank_row(row, higher_is_better) for row in table.values])
    means = ranks.mean(axis=0)
    return {m: float(r) for m, r in zip(table.methods, means)}


# --- chi-square survival via regularized incomplete gamma ------------------

_GAMMA_EPS = 1e-15
_GAMMA_MAX_ITER = 500


def _gamma_p_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_GAMMA_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    # modified Lentz continued fraction for the upper tail
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gamma_p(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    if a <= 0.0 or x < 0.0:
        raise MetricError("gamma_p needs a > 0 and x >= 0")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x)
    return 1.0 - _gamma_q_contfrac(a, x)


def chi2_sf(x: float, df: int) -> float:
    """Chi-square survival function P(X >= x) with df degrees of freedom.

    Uses the series for the lower tail and the continued fraction directly
    in the upper tail, so small survival probabilities keep full relative
    accuracy.
    """
    if x <= 0.0:
        return 1.0
    a, xx = df / 2.0, x / 2.0
    if xx < a + 1.0:
        return 1.0 - _gamma_p_series(a, xx)
    return _gamma_q_contfrac(a, xx)


def normal_sf(z: float) -> float:
    """Standard normal survival function."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def finner_adjust(p_values) -> list[float]:
    """Finner step-down adjustment for control comparisons.

    Sorts the raw p-values, applies p'_(i) = 1 - (1 - p_(i))^(m/i) with m =
    number of hypotheses, enforces monotonicity, and returns the adjusted
    values in the original input order.
    """
    ps = list(map(float, p_values))
    m = len(ps)
    order = sorted(range(m), key=lambda i: ps[i])
    adjusted = [0.0] * m
    running = 0.0
    for pos, idx in enumerate(order, start=1):
        value = 1.0 - (1.0 - ps[idx]) ** (m / pos)
        running = max(running, min(1.0, value))
        adjusted[idx] = running
    return adjusted


def friedman_finner(table: MethodResultTable, higher_is_better: bool = True) -> FriedmanResult:
    """Friedman chi-square over per-dataset ranks plus Finner-adjusted
    pairwise z-tests of every method against the best-ranked one."""
    n_datasets, m = table.values.shape
    if m < 3:
        raise MetricError("Friedman test needs at least 3 methods")
    if n_datasets < 2:
        raise MetricError("Friedman test needs at least 2 datasets")

    ranks = np.vstack([rank_row(row, higher_is_better) for row in table.values])
    mean_ranks = ranks.mean(axis=0)
    chi2 = 12.0 * n_datasets / (m * (m + 1)) * (float((mean_ranks ** 2).sum()) - m * (m + 1) ** 2 / 4.0)
    chi2 = max(chi2, 0.0)
    p = chi2_sf(chi2, m - 1)

    control = int(mean_ranks.argmin())
    scale = math.sqrt(m * (m + 1) / (6.0 * n_datasets))
    others = [j for j in range(m) if j != control]
    zs = [(mean_ranks[j] - mean_ranks[control]) / scale for j in others]
    raw = [2.0 * normal_sf(abs(z)) for z in zs]
    adjusted = finner_adjust(raw)
    comparisons = tuple(
        (table.methods[j], float(z), float(pr), float(pa))
        for j, z, pr, pa in zip(others, zs, raw, adjusted)
    )
    return FriedmanResult(
        chi2=float(chi2),
        p=float(p),
        control=table.methods[control],
        avg_ranks={name: float(r) for name, r in zip(table.methods, mean_ranks)},
        comparisons=comparisons,
    )


def write_table_csv(table: MethodResultTable, path: str, decimals: int = 4) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["dataset", *table.methods])
        for name, row in zip(table.datasets, table.values):
            writer.writerow([name] + [f"{v:.{decimals}f}" for v in row])


def read_table_csv(path: str) -> MethodResultTable:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if len(rows) < 2 or len(rows[0]) < 2:
        raise FormatError(f"{path}: not a result table")
    methods = tuple(h.strip() for h in rows[0][1:])
    datasets = []
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(methods) + 1:
            raise FormatError(f"{path}: row {lineno} has {len(row)} cells, expected {len(methods) + 1}")
        datasets.append(row[0].strip())
        try:
            values.append([float(c) for c in row[1:]])
        except ValueError as exc:
            raise FormatError(f"{path}: row {lineno}: {exc}") from None
    return MethodResultTable(tuple(datasets), methods, np.asarray(values))
