"""Independent oracles used by the walk tests: dense-matrix expectations
computed without touching the sampling code path."""

import numpy as np

from rwmau.graph import TransitionGraph


def dense_transition_matrix(g: TransitionGraph) -> np.ndarray:
    """(n, n) row-stochastic matrix rebuilt from the neighbour lists."""
    p = np.zeros((g.n, g.n))
    for i in range(g.n):
        for j in range(g.k):
            p[i, g.neighbors[i, j]] += g.probs[i, j]
    return p


def expected_walk_scores(p: np.ndarray, start: int, gamma: int) -> np.ndarray:
    """Per-node expectation of the harmonic visit score of one walk:
    sum over steps b of P^b[start, :] / b."""
    out = np.zeros(p.shape[0])
    step = np.zeros(p.shape[0])
    step[start] = 1.0
    for b in range(1, gamma + 1):
        step = step @ p
        out += step / b
    return out
