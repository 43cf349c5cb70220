"""Seeded random walks on a transition graph and harmonic proximity scores.

Walks start at minority nodes; every visit of a majority node at step b
(1-based) contributes 1/b to that node's score, so nodes reached earlier
and more often score higher.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .graph import TransitionGraph

__all__ = ["WalkConfig", "ScoreVector", "random_walk", "proximity_scores", "dump_scores"]


@dataclass(frozen=True)
class WalkConfig:
    """Walk length, replicates per start node, and the base seed."""

    gamma: int
    walks_per_start: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.gamma < 1:
            raise ConfigError("gamma must be >= 1")
        if self.walks_per_start < 1:
            raise ConfigError("walks_per_start must be >= 1")


@dataclass(frozen=True)
class ScoreVector:
    """Majority node index -> accumulated proximity score."""

    nu: dict[int, float]


def _steps_from_uniforms(g: TransitionGraph, cum: np.ndarray, current: np.ndarray,
                         u: np.ndarray) -> np.ndarray:
    """Advance a batch of walks one step using one uniform draw each."""
    rows = cum[current]
    slot = (u[:, None] >= rows).sum(axis=1)
    np.minimum(slot, g.k - 1, out=slot)  # guard against cumulative rounding short of 1.0
    return g.neighbors[current, slot]


def random_walk(g: TransitionGraph, start: int, gamma: int, rng: np.random.Generator) -> np.ndarray:
    """One walk of `gamma` transitions; the start node itself is not recorded.

    Entry b of the result is the node reached after b+1 transitions. The rng
    stream fully determines the walk.
    """
    cum = g.cumulative_probs()
    seq = np.empty(gamma, dtype=np.int64)
    current = np.asarray([start], dtype=np.int64)
    for b in range(gamma):
        current = _steps_from_uniforms(g, cum, current, rng.random(1))
        seq[b] = current[0]
    return seq


def proximity_scores(g: TransitionGraph, minority, majority, cfg: WalkConfig) -> ScoreVector:
    """Harmonically weighted visit counts of majority nodes.

    Runs cfg.walks_per_start walks of length cfg.gamma from every minority
    node. The walk stream for (seed, start, replicate) is fixed, so results
    do not depend on execution order; accumulation happens in canonical
    (start, replicate, step) order.
    """
    minority = np.sort(np.asarray(minority, dtype=np.int64))
    majority = np.sort(np.asarray(majority, dtype=np.int64))
    if np.intersect1d(minority, majority).size:
        raise ConfigError("minority and majority index sets overlap")
    is_majority = np.zeros(g.n, dtype=bool)
    is_majority[majority] = True

    cum = g.cumulative_probs()
    r, gamma = cfg.walks_per_start, cfg.gamma
    inv_beta = 1.0 / np.arange(1, gamma + 1)
    nu = np.zeros(g.n, dtype=np.float64)

    # all walks advance together; walk (start, replicate) still consumes
    # exactly the uniforms of its own (seed, start) stream
    uniforms = np.empty((minority.size * r, gamma), dtype=np.float64)
    for i, s in enumerate(minority):
        uniforms[i * r:(i + 1) * r] = np.random.default_rng((cfg.seed, int(s))).random((r, gamma))
    current = np.repeat(minority, r)
    for b in range(gamma):
        current = _steps_from_uniforms(g, cum, current, uniforms[:, b])
        hits = current[is_majority[current]]
        np.add.at(nu, hits, inv_beta[b])
    return ScoreVector(nu={int(l): float(nu[l]) for l in majority})


def dump_scores(sv: ScoreVector) -> str:
    """Score dump: 'node_index nu' per line, descending score then index."""
    items = sorted(sv.nu.items(), key=lambda kv: (-kv[1], kv[0]))
    return "\n".join(f"{idx} {score:.12g}" for idx, score in items) + "\n"
