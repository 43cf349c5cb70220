import numpy as np
import pytest

from oracles import dense_transition_matrix, expected_walk_scores
from rwmau.errors import ConfigError
from rwmau.graph import TransitionGraph, build_graph
from rwmau.walk import WalkConfig, dump_scores, proximity_scores, random_walk


def chain_graph(edges):
    """Probability-1 graph: node i always steps to edges[i]."""
    neighbors = np.asarray(edges, dtype=np.int64)[:, None]
    probs = np.ones_like(neighbors, dtype=np.float64)
    return TransitionGraph(neighbors=neighbors, probs=probs, k=1)


class TestRandomWalk:
    def test_deterministic_cycle(self):
        g = chain_graph([1, 2, 0])
        seq = random_walk(g, 0, 4, np.random.default_rng(0))
        assert list(seq) == [1, 2, 0, 1]

    def test_single_step_lands_on_a_start_neighbor(self):
        rng = np.random.default_rng(1)
        g = build_graph(rng.normal(size=(12, 2)), 3)
        for seed in range(10):
            seq = random_walk(g, 4, 1, np.random.default_rng(seed))
            assert seq.shape == (1,)
            assert seq[0] in g.neighbors[4]

    def test_start_is_not_recorded(self):
        g = chain_graph([1, 0])
        seq = random_walk(g, 0, 3, np.random.default_rng(0))
        assert list(seq) == [1, 0, 1]

    def test_fixed_stream_reproduces(self):
        rng = np.random.default_rng(2)
        g = build_graph(rng.normal(size=(15, 3)), 4)
        a = random_walk(g, 0, 20, np.random.default_rng(77))
        b = random_walk(g, 0, 20, np.random.default_rng(77))
        assert np.array_equal(a, b)

    def test_single_step_frequencies_match_probabilities(self):
        rng = np.random.default_rng(3)
        g = build_graph(rng.normal(size=(10, 2)), 4)
        start = 2
        # 100k single-transition walks from one start via the batched scorer
        sv = proximity_scores(g, [start], np.setdiff1d(np.arange(10), [start]),
                              WalkConfig(gamma=1, walks_per_start=100_000, seed=5))
        for j, p in zip(g.neighbors[start], g.probs[start]):
            assert sv.nu[int(j)] / 100_000 == pytest.approx(p, abs=0.01)


class TestProximityScores:
    def test_visits_at_steps_one_and_three(self):
        # 2-node shuttle: walk from the minority node hits the majority node
        # at steps 1 and 3 of a length-3 walk
        g = chain_graph([1, 0])
        sv = proximity_scores(g, [0], [1], WalkConfig(gamma=3, seed=0))
        assert sv.nu[1] == pytest.approx(1.0 + 1.0 / 3.0, abs=1e-12)

    def test_two_starts_visiting_same_node_at_step_two(self):
        # 0 -> 1 -> 2 and 4 -> 3 -> 2: node 2 collects 1/2 + 1/2
        g = chain_graph([1, 2, 3, 2, 3])
        sv = proximity_scores(g, [0, 4], [1, 2, 3], WalkConfig(gamma=2, seed=0))
        assert sv.nu[2] == pytest.approx(1.0, abs=1e-12)
        assert sv.nu[1] == pytest.approx(1.0, abs=1e-12)
        assert sv.nu[3] == pytest.approx(1.0, abs=1e-12)

    def test_unvisited_node_scores_zero(self):
        g = chain_graph([1, 0, 3, 2])
        sv = proximity_scores(g, [0], [1, 2, 3], WalkConfig(gamma=5, seed=0))
        assert sv.nu[2] == 0.0 and sv.nu[3] == 0.0

    def test_minority_visits_contribute_nothing(self):
        g = chain_graph([1, 2, 0])  # visits minority node 0 mid-walk
        sv = proximity_scores(g, [0], [1, 2], WalkConfig(gamma=6, seed=0))
        assert set(sv.nu) == {1, 2}
        assert sv.nu[1] == pytest.approx(1.0 + 1.0 / 4.0, abs=1e-12)
        assert sv.nu[2] == pytest.approx(1.0 / 2.0 + 1.0 / 5.0, abs=1e-12)

    def test_matches_sequential_walk_composition(self):
        rng = np.random.default_rng(0)
        g = build_graph(rng.normal(size=(30, 3)), 4)
        minority = np.array([0, 5, 9])
        majority = np.setdiff1d(np.arange(30), minority)
        cfg = WalkConfig(gamma=6, walks_per_start=3, seed=42)
        sv = proximity_scores(g, minority, majority, cfg)
        manual = {int(l): 0.0 for l in majority}
        for s in minority:
            stream = np.random.default_rng((cfg.seed, int(s)))
            for _ in range(cfg.walks_per_start):
                for b, node in enumerate(random_walk(g, int(s), cfg.gamma, stream), start=1):
                    if int(node) in manual:
                        manual[int(node)] += 1.0 / b
        for l in manual:
            assert sv.nu[l] == pytest.approx(manual[l], abs=1e-9)

    def test_deterministic_and_independent_of_call_count(self):
        rng = np.random.default_rng(9)
        g = build_graph(rng.normal(size=(25, 2)), 3)
        minority = np.arange(5)
        majority = np.arange(5, 25)
        cfg = WalkConfig(gamma=8, walks_per_start=2, seed=123)
        a = proximity_scores(g, minority, majority, cfg)
        b = proximity_scores(g, minority, majority, cfg)
        assert a.nu == b.nu

    def test_overlapping_sets_rejected(self):
        g = chain_graph([1, 0])
        with pytest.raises(ConfigError):
            proximity_scores(g, [0], [0, 1], WalkConfig(gamma=1, seed=0))

    def test_score_upper_bound(self):
        rng = np.random.default_rng(11)
        g = build_graph(rng.normal(size=(12, 2)), 3)
        minority = np.array([0, 1, 2])
        majority = np.arange(3, 12)
        r, gamma = 4, 7
        sv = proximity_scores(g, minority, majority, WalkConfig(gamma, r, seed=3))
        bound = r * minority.size * sum(1.0 / b for b in range(1, gamma + 1))
        assert max(sv.nu.values()) <= bound + 1e-12

    def test_monte_carlo_matches_dense_matrix_oracle(self):
        rng = np.random.default_rng(21)
        g = build_graph(rng.normal(size=(8, 2)), 3)
        p = dense_transition_matrix(g)
        start, gamma, walks = 0, 4, 40_000
        expected = expected_walk_scores(p, start, gamma)
        sv = proximity_scores(g, [start], np.arange(1, 8),
                              WalkConfig(gamma=gamma, walks_per_start=walks, seed=17))
        for l in range(1, 8):
            if expected[l] > 0.02:
                assert sv.nu[l] / walks == pytest.approx(expected[l], rel=0.03)

    def test_doubling_replicates_doubles_scores(self):
        rng = np.random.default_rng(13)
        g = build_graph(rng.normal(size=(10, 2)), 3)
        majority = np.arange(1, 10)
        lo = proximity_scores(g, [0], majority, WalkConfig(gamma=4, walks_per_start=100_000, seed=1))
        hi = proximity_scores(g, [0], majority, WalkConfig(gamma=4, walks_per_start=200_000, seed=2))
        assert sum(hi.nu.values()) / sum(lo.nu.values()) == pytest.approx(2.0, rel=0.05)


class TestDumpScores:
    def test_sorted_by_descending_score_then_index(self):
        sv_text = dump_scores(type("SV", (), {"nu": {3: 0.5, 1: 1.25, 2: 0.5}})())
        assert sv_text.splitlines() == ["1 1.25", "2 0.5", "3 0.5"]
