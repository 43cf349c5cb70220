import math

import numpy as np
import pytest
import scipy.stats

from published_results import KNN_AUC_EXPECTED_RANKS, knn_auc_table
from rwmau.errors import FormatError, MetricError
from rwmau.metrics import (MethodResultTable, auc, average_ranks, chi2_sf, f1_minority,
                           finner_adjust, friedman_finner, normal_sf, rank_row,
                           read_table_csv, write_table_csv)


class TestAuc:
    def test_perfect_separation(self):
        assert auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.0

    def test_all_ties(self):
        assert auc([0.5, 0.5, 0.5, 0.5], [0, 1, 0, 1]) == 0.5

    def test_enumerated_four_point_example(self):
        assert auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75

    def test_single_class_rejected(self):
        with pytest.raises(MetricError):
            auc([0.1, 0.9], [1, 1])

    def test_complement_identity_exact(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            n = int(rng.integers(4, 60))
            scores = rng.choice(np.round(rng.random(6), 2), size=n)
            labels = rng.integers(0, 2, n)
            if labels.sum() in (0, n):
                labels[0] = 1 - labels[0]
            assert auc(scores, labels) + auc(scores, 1 - labels) == 1.0

    def test_invariant_under_monotone_transform(self):
        rng = np.random.default_rng(1)
        scores = rng.random(40)
        labels = rng.integers(0, 2, 40)
        labels[0], labels[1] = 0, 1
        assert auc(scores, labels) == auc(np.exp(3 * scores), labels)

    def test_matches_pair_counting_oracle(self):
        rng = np.random.default_rng(2)
        scores = rng.choice([0.1, 0.3, 0.5, 0.7], size=30)
        labels = rng.integers(0, 2, 30)
        labels[0], labels[1] = 0, 1
        wins = ties = 0
        pos = scores[labels == 1]
        neg = scores[labels == 0]
        for sp in pos:
            for sn in neg:
                wins += sp > sn
                ties += sp == sn
        expect = (wins + 0.5 * ties) / (len(pos) * len(neg))
        assert auc(scores, labels) == pytest.approx(expect, abs=1e-12)


class TestF1:
    def test_perfect(self):
        assert f1_minority([0.9, 0.8, 0.1], [1, 1, 0]) == 1.0

    def test_two_thirds(self):
        # TP=2, FP=1, FN=1 -> P = R = 2/3
        scores = [0.9, 0.8, 0.7, 0.1, 0.2]
        labels = [1, 1, 0, 1, 0]
        assert f1_minority(scores, labels) == pytest.approx(2 / 3)

    def test_no_predicted_minority(self):
        assert f1_minority([0.1, 0.2, 0.3], [1, 1, 0]) == 0.0

    def test_threshold_is_inclusive(self):
        assert f1_minority([0.5, 0.4], [1, 0]) == 1.0


class TestRanks:
    def test_dominating_method_ranks_first(self):
        table = MethodResultTable(("d1", "d2"), ("a", "b", "c"),
                                  np.array([[0.9, 0.5, 0.4], [0.8, 0.6, 0.1]]))
        ranks = average_ranks(table)
        assert ranks["a"] == 1.0

    def test_exact_tie_shares_average(self):
        table = MethodResultTable(("d1",), ("a", "b", "c"),
                                  np.array([[0.7, 0.7, 0.1]]))
        ranks = average_ranks(table)
        assert ranks["a"] == 1.5 and ranks["b"] == 1.5 and ranks["c"] == 3.0

    def test_lower_is_better_mode(self):
        row = rank_row(np.array([0.1, 0.5, 0.3]), higher_is_better=False)
        assert list(row) == [1.0, 3.0, 2.0]

    def test_rank_sums_are_invariant(self):
        rng = np.random.default_rng(3)
        values = rng.random((10, 5))
        table = MethodResultTable(tuple(f"d{i}" for i in range(10)),
                                  tuple("abcde"), values)
        ranks = average_ranks(table)
        assert sum(ranks.values()) == pytest.approx(5 * 6 / 2, abs=1e-12)

    def test_published_knn_auc_ranks_reproduced(self):
        ranks = average_ranks(knn_auc_table())
        for method, expected in KNN_AUC_EXPECTED_RANKS.items():
            assert ranks[method] == pytest.approx(expected, abs=0.005)


class TestChi2:
    def test_against_scipy(self):
        for df in (1, 2, 3, 5, 10, 20):
            for x in (0.001, 0.5, 1.0, 3.0, 8.0, 20.0, 60.0):
                mine = chi2_sf(x, df)
                ref = scipy.stats.chi2.sf(x, df)
                assert mine == pytest.approx(ref, rel=1e-10, abs=1e-300)

    def test_normal_sf_against_scipy(self):
        for z in (-4.0, -1.5, 0.0, 0.7, 2.3, 6.0):
            assert normal_sf(z) == pytest.approx(scipy.stats.norm.sf(z), rel=1e-12)

    def test_df_two_closed_form(self):
        assert chi2_sf(8.0, 2) == pytest.approx(math.exp(-4.0), rel=1e-12)


class TestFinner:
    def test_two_hypothesis_example(self):
        adjusted = finner_adjust([0.01, 0.04])
        assert adjusted[0] == pytest.approx(1.0 - (1.0 - 0.01) ** 2, rel=1e-12)
        assert adjusted[1] == pytest.approx(0.04, rel=1e-12)
        assert adjusted[0] == pytest.approx(0.0199, abs=5e-5)

    def test_monotone_and_at_least_raw(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            raw = rng.random(5)
            adjusted = finner_adjust(raw)
            assert all(a >= r - 1e-15 for a, r in zip(adjusted, raw))
            order = np.argsort(raw, kind="stable")
            ordered = [adjusted[i] for i in order]
            assert all(x <= y + 1e-15 for x, y in zip(ordered, ordered[1:]))
            assert all(0.0 <= a <= 1.0 for a in adjusted)

    def test_preserves_input_order(self):
        adjusted = finner_adjust([0.04, 0.01])
        assert adjusted[1] <= adjusted[0]


class TestFriedman:
    def test_identical_methods_no_signal(self):
        table = MethodResultTable(("d1", "d2"), ("a", "b", "c"),
                                  np.array([[0.5, 0.5, 0.5], [0.7, 0.7, 0.7]]))
        result = friedman_finner(table)
        assert result.chi2 == 0.0
        assert result.p == 1.0

    def test_constant_ranks_closed_form(self):
        # method a always best, b middle, c worst over 4 datasets
        values = np.array([[0.9, 0.5, 0.1]] * 4) + np.arange(4)[:, None] * 0.001
        table = MethodResultTable(tuple(f"d{i}" for i in range(4)), ("a", "b", "c"), values)
        result = friedman_finner(table)
        assert result.chi2 == pytest.approx(8.0, abs=1e-12)
        assert result.p == pytest.approx(math.exp(-4.0), rel=1e-10)
        assert result.control == "a"

    def test_needs_three_methods(self):
        table = MethodResultTable(("d1", "d2"), ("a", "b"), np.array([[0.5, 0.4], [0.7, 0.2]]))
        with pytest.raises(MetricError):
            friedman_finner(table)

    def test_needs_two_datasets(self):
        table = MethodResultTable(("d1",), ("a", "b", "c"), np.array([[0.5, 0.4, 0.3]]))
        with pytest.raises(MetricError):
            friedman_finner(table)

    def test_comparisons_cover_all_but_control(self):
        result = friedman_finner(knn_auc_table())
        assert result.control == "RWMaU"
        names = {c[0] for c in result.comparisons}
        assert names == {"Original", "RUS", "IHT", "CC", "NCR"}
        for _, z, p_raw, p_adj in result.comparisons:
            assert z >= 0.0
            assert 0.0 <= p_raw <= 1.0
            assert p_adj >= p_raw - 1e-15


class TestTableCsv:
    def test_round_trip(self, tmp_path):
        table = knn_auc_table()
        path = str(tmp_path / "t.csv")
        write_table_csv(table, path)
        back = read_table_csv(path)
        assert back.datasets == table.datasets
        assert back.methods == table.methods
        assert np.abs(back.values - table.values).max() < 1e-12

    def test_malformed_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("dataset,a,b\nd1,0.5\n")
        with pytest.raises(FormatError):
            read_table_csv(str(path))

    def test_missing_cells_rejected(self):
        with pytest.raises(FormatError):
            MethodResultTable(("d1",), ("a", "b"), np.array([[0.1, np.nan]]))
