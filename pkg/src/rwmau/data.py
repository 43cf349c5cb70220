"""Loading, validation, splitting and scaling of binary-class datasets.

Datasets are kept as a plain feature matrix plus a 0/1 label vector where
label 1 always marks the minority class (ties go to the lexicographically
smaller original label).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, FormatError, ParseError, SplitError

__all__ = [
    "Dataset",
    "SplitSpec",
    "Scaler",
    "load_dataset",
    "save_dataset",
    "random_split",
    "random_split_indices",
    "standardize",
]

MAX_SPLIT_RETRIES = 100


@dataclass(frozen=True)
class Dataset:
    """Immutable binary-classification dataset.

    features: (n, d) float matrix.
    labels:   (n,) vector of {0, 1}; 1 is the minority class.
    names:    optional feature names (length d).
    source_label_map: original label string -> 0/1 assignment.
    """

    features: np.ndarray
    labels: np.ndarray
    names: tuple[str, ...] | None = None
    source_label_map: dict[str, int] = field(default_factory=lambda: {"0": 0, "1": 1})

    def __post_init__(self):
        features = np.ascontiguousarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise FormatError("features must be a 2-d matrix")
        n, d = features.shape
        if n < 2 or d < 1:
            raise FormatError(f"dataset too small: n={n}, d={d}")
        if labels.shape != (n,):
            raise FormatError("labels length does not match feature rows")
        if not np.isin(labels, (0, 1)).all():
            raise FormatError("labels must be 0 or 1")
        if not np.isfinite(features).all():
            raise FormatError("features contain missing or non-finite values")
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def minority_indices(self) -> np.ndarray:
        return np.flatnonzero(self.labels == 1)

    @property
    def majority_indices(self) -> np.ndarray:
        return np.flatnonzero(self.labels == 0)

    @property
    def n_minority(self) -> int:
        return int((self.labels == 1).sum())

    @property
    def n_majority(self) -> int:
        return int((self.labels == 0).sum())

    def subset(self, indices) -> "Dataset":
        """New Dataset holding the given rows (order preserved)."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.features[idx].copy(), self.labels[idx].copy(),
                       self.names, dict(self.source_label_map))

    def replace(self, features, labels) -> "Dataset":
        """New Dataset with the same names/label map but different rows."""
        return Dataset(features, labels, self.names, dict(self.source_label_map))


@dataclass(frozen=True)
class SplitSpec:
    """Randomized train/test split protocol: fraction, repetitions, seed."""

    train_fraction: float = 0.8
    repetitions: int = 10
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(f"train_fraction must be in (0,1), got {self.train_fraction}")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be positive")


@dataclass(frozen=True)
class Scaler:
    """Per-feature location/scale estimated on a training set."""

    mean: np.ndarray
    std: np.ndarray

    def apply(self, features: np.ndarray) -> np.ndarray:
        safe = np.where(self.std > 0.0, self.std, 1.0)
        inv = np.where(self.std > 0.0, 1.0 / safe, 0.0)
        return (np.asarray(features, dtype=np.float64) - self.mean) * inv


def _assign_binary_labels(raw_labels: list[str]) -> tuple[np.ndarray, dict[str, int]]:
    distinct = sorted(set(raw_labels))
    if len(distinct) != 2:
        raise FormatError(f"expected exactly 2 distinct labels, found {len(distinct)}: {distinct[:5]}")
    a, b = distinct  # a < b lexicographically
    count_a = raw_labels.count(a)
    count_b = len(raw_labels) - count_a
    # minority gets label 1; tie -> lexicographically smaller original label
    minority = a if count_a <= count_b else b
    mapping = {a: int(a == minority), b: int(b == minority)}
    labels = np.fromiter((mapping[r] for r in raw_labels), dtype=np.int64, count=len(raw_labels))
    return labels, mapping


def _parse_rows(rows: list[tuple[int, list[str]]], class_col: int, n_cols: int,
                names: tuple[str, ...] | None) -> Dataset:
    if not rows:
        raise FormatError("file contains no data rows")
    features = np.empty((len(rows), n_cols - 1), dtype=np.float64)
    raw_labels: list[str] = []
    feat_cols = [c for c in range(n_cols) if c != class_col]
    for i, (lineno, cells) in enumerate(rows):
        if len(cells) != n_cols:
            raise ParseError(f"row {lineno}: expected {n_cols} columns, got {len(cells)}")
        for j, c in enumerate(feat_cols):
            cell = cells[c].strip()
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(f"row {lineno}, column {c + 1}: non-numeric value {cell!r}") from None
            if not math.isfinite(value):
                raise ParseError(f"row {lineno}, column {c + 1}: missing or non-finite value {cell!r}")
            features[i, j] = value
        raw_labels.append(cells[class_col].strip())
    labels, mapping = _assign_binary_labels(raw_labels)
    return Dataset(features, labels, names, mapping)


def _load_csv(path: str) -> Dataset:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        raw = [(lineno, row) for lineno, row in enumerate(reader, start=1)
               if row and any(cell.strip() for cell in row)]
    if not raw:
        raise FormatError(f"{path}: empty file")
    n_cols = len(raw[0][1])
    header: tuple[str, ...] | None = None
    first = raw[0][1]
    # header row: any non-class cell that does not parse as a number
    if _looks_like_header(first):
        header = tuple(c.strip() for c in first[:-1])
        raw = raw[1:]
    return _parse_rows(raw, class_col=n_cols - 1, n_cols=n_cols, names=header)


def _looks_like_header(cells: list[str]) -> bool:
    for cell in cells[:-1]:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def _strip_quotes(token: str) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == token[-1] and token[0] in "'\"":
        token = token[1:-1]
    return token


def _load_keel(path: str) -> Dataset:
    attr_names: list[str] = []
    inputs: list[str] | None = None
    outputs: list[str] | None = None
    rows: list[tuple[int, list[str]]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("@"):
                key, _, rest = line.partition(" ")
                key = key.lower()
                if key == "@attribute":
                    # "@attribute name type" or "@attribute name {a,b}"
                    name = _strip_quotes(rest.split("{")[0].split("[")[0].split()[0]) if rest.split() else ""
                    attr_names.append(name)
                elif key == "@inputs":
                    inputs = [_strip_quotes(t) for t in rest.split(",") if t.strip()]
                elif key in ("@outputs", "@output"):
                    outputs = [_strip_quotes(t) for t in rest.split(",") if t.strip()]
                continue
            rows.append((lineno, [c.strip() for c in line.split(",")]))
    if not rows:
        raise FormatError(f"{path}: no data section")
    n_cols = len(rows[0][1])
    if outputs and attr_names and outputs[0] in attr_names:
        class_col = attr_names.index(outputs[0])
    else:
        class_col = n_cols - 1
    if inputs and attr_names:
        names = tuple(inputs)
    elif attr_names and len(attr_names) == n_cols:
        names = tuple(a for i, a in enumerate(attr_names) if i != class_col)
    else:
        names = None
    return _parse_rows(rows, class_col=class_col, n_cols=n_cols, names=names)


def load_dataset(path: str, format: str = "csv") -> Dataset:
    """Load a binary-class dataset; the class label sits in the last column
    (or the declared @outputs attribute for keel files).

    The rarer original label is mapped to 1; equal counts map the
    lexicographically smaller label to 1.
    """
    if format == "csv":
        return _load_csv(path)
    if format == "keel":
        return _load_keel(path)
    raise ConfigError(f"unknown format {format!r}, expected 'csv' or 'keel'")


def save_dataset(ds: Dataset, path: str) -> None:
    """Write a Dataset as csv (header + rows, original labels, class last).

    Floats are written in shortest round-trip form, so reloading yields
    bit-identical features.
    """
    inverse = {v: k for k, v in ds.source_label_map.items()}
    names = list(ds.names) if ds.names is not None else [f"f{j + 1}" for j in range(ds.d)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names + ["class"])
        for i in range(ds.n):
            writer.writerow([repr(float(v)) for v in ds.features[i]] + [inverse[int(ds.labels[i])]])


def random_split_indices(ds: Dataset, spec: SplitSpec, repetition: int) -> tuple[np.ndarray, np.ndarray]:
    """Index sets of the (train, test) partition for one repetition.

    Deterministic in (spec.seed, repetition). Partitions are redrawn from the
    next substream (at most MAX_SPLIT_RETRIES times) until the training side
    contains both classes.
    """
    if repetition >= spec.repetitions:
        raise ConfigError(f"repetition {repetition} out of range (repetitions={spec.repetitions})")
    n = ds.n
    n_train = int(round(spec.train_fraction * n))
    n_train = min(max(n_train, 1), n - 1)  # keep both sides nonempty
    for attempt in range(MAX_SPLIT_RETRIES):
        rng = np.random.default_rng((spec.seed, repetition, attempt))
        perm = rng.permutation(n)
        train = np.sort(perm[:n_train])
        test = np.sort(perm[n_train:])
        train_labels = ds.labels[train]
        if train_labels.min() == 0 and train_labels.max() == 1:
            return train, test
    raise SplitError(
        f"could not draw a training partition containing both classes in {MAX_SPLIT_RETRIES} attempts")


def random_split(ds: Dataset, spec: SplitSpec, repetition: int) -> tuple[Dataset, Dataset]:
    """Split into (train, test) Datasets; see random_split_indices."""
    train_idx, test_idx = random_split_indices(ds, spec, repetition)
    return ds.subset(train_idx), ds.subset(test_idx)


def standardize(train: Dataset) -> tuple[Dataset, Scaler]:
    """Center and scale each feature to mean 0, population stddev 1.

    Zero-variance columns map to 0. The returned Scaler applies the same
    transform to held-out data.
    """
    mean = train.features.mean(axis=0)
    std = train.features.std(axis=0)  # population stddev
    scaler = Scaler(mean=mean, std=std)
    return train.replace(scaler.apply(train.features), train.labels.copy()), scaler
