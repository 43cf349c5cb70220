"""rwmau: random-walk steered majority undersampling for imbalanced binary
classification, with baseline undersamplers, built-in classifiers, and a
reproducible benchmark harness."""

__version__ = "0.1.0"

from .data import Dataset, Scaler, SplitSpec, load_dataset, random_split, save_dataset, standardize
from .errors import (ConfigError, FormatError, MetricError, ParseError, RwmauError, SplitError)
from .graph import TransitionGraph, build_graph, knn_neighbors, pairwise_distances, transition_probabilities
from .metrics import MethodResultTable, auc, average_ranks, f1_minority, friedman_finner
from .resample import (ResampleConfig, ResampleResult, cluster_centroid_undersample, ncr_clean,
                       random_undersample, rwmau_undersample, undersample_count)
from .tuning import TuneGrid, tune
from .walk import ScoreVector, WalkConfig, proximity_scores, random_walk

__all__ = [
    "__version__",
    "Dataset", "Scaler", "SplitSpec", "load_dataset", "random_split", "save_dataset", "standardize",
    "RwmauError", "FormatError", "ParseError", "ConfigError", "SplitError", "MetricError",
    "TransitionGraph", "pairwise_distances", "knn_neighbors", "transition_probabilities", "build_graph",
    "WalkConfig", "ScoreVector", "random_walk", "proximity_scores",
    "ResampleConfig", "ResampleResult", "undersample_count", "rwmau_undersample",
    "random_undersample", "cluster_centroid_undersample", "ncr_clean",
    "auc", "f1_minority", "average_ranks", "friedman_finner", "MethodResultTable",
    "TuneGrid", "tune",
]
