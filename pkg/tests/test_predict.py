from math import comb

import numpy as np
import pytest

from hypervote.model import (
    HyperedgeKey,
    HypergraphModel,
    build_incidence_dense,
    train_model,
)
from hypervote.predict import (
    IncidenceKeys,
    MeanTuple,
    classify_unit,
    dense_row_count,
    incidence_keys,
    mean_tuple,
    mean_tuples_matrix,
    predict_class,
)
from hypervote.preprocess import DiscretizedDataset, FeatureStats, PartitionParams

from conftest import random_dataset


def _toy_model():
    """One feature, two bins {1, 2}; rows (2/3, 1/3) and (0, 1)."""
    return HypergraphModel(
        order=1,
        params=PartitionParams(1.0, 0.0),
        stats=FeatureStats(np.array([0.0]), np.array([1.0])),
        bin_min=1,
        bin_max=2,
        class_counts=np.array([2, 2]),
        keys=np.array([0, 1], dtype=np.int64),
        weights=np.array([[2 / 3, 1 / 3], [0.0, 1.0]]),
    )


class TestIncidenceKeys:
    def test_pairs_of_three_features(self):
        out = incidence_keys(np.array([1, 4, 2]), 2, 0, 5)
        assert set(out.keys) == {
            HyperedgeKey((1, 2), (1, 4)),
            HyperedgeKey((1, 3), (1, 2)),
            HyperedgeKey((2, 3), (4, 2)),
        }
        assert out.out_of_range == 0

    def test_order_one_singletons(self):
        out = incidence_keys(np.array([3, -1, 0]), 1, -1, 3)
        assert out.keys == (
            HyperedgeKey((1,), (3,)),
            HyperedgeKey((2,), (-1,)),
            HyperedgeKey((3,), (0,)),
        )

    def test_full_order_single_key(self):
        out = incidence_keys(np.array([5, 6]), 2, 0, 9)
        assert len(out.keys) == 1

    def test_out_of_range_counted_but_kept(self):
        out = incidence_keys(np.array([0, 99]), 2, 0, 5)
        assert out.out_of_range == 1
        assert len(out.keys) == comb(2, 2)


class TestMeanTuple:
    def test_hit_first_row(self):
        model = _toy_model()
        keys = incidence_keys(np.array([1]), 1, 1, 2)
        mt = mean_tuple(keys, model)
        assert np.allclose(mt.values, [1 / 3, 1 / 6])

    def test_all_keys_absent_gives_tie(self):
        model = _toy_model()
        keys = incidence_keys(np.array([7]), 1, 1, 2)
        mt = mean_tuple(keys, model)
        expected = comb(1, 1) / (2 * dense_row_count(1, 1, 2))
        assert np.allclose(mt.values, [expected, expected])

    def test_matches_dense_column_means(self):
        rng = np.random.default_rng(4)
        raw = random_dataset(rng, 8, 3, 2)
        params = PartitionParams(0.8, 0.1)
        model = train_model(raw, params, 1)

        from hypervote.preprocess import discretize, fit_stats, zscore

        stats = fit_stats(raw)
        dset = discretize(zscore(raw, stats), params)
        dense = build_incidence_dense(dset)
        # dense weight array including uniform rows for empty hyperedges
        n_rows = dense.matrix.shape[1]
        full = np.full((n_rows, 2), 0.5)
        full[model.keys] = model.weights
        for i in range(raw.n_units):
            nu = dense.matrix[i]
            dense_mean = (nu[:, None] * full).sum(axis=0) / n_rows
            keys = incidence_keys(dset.bins[i], 1, model.bin_min, model.bin_max)
            assert np.allclose(mean_tuple(keys, model).values, dense_mean)

    def test_order_mismatch_rejected(self):
        model = _toy_model()
        bad = IncidenceKeys((HyperedgeKey((1, 2), (0, 0)),), 0)
        with pytest.raises(ValueError):
            mean_tuple(bad, model)


class TestPredictClass:
    def test_larger_first_entry(self):
        assert predict_class(MeanTuple(np.array([1 / 3, 1 / 6]))) == 1

    def test_tie_breaks_to_lowest_index(self):
        assert predict_class(MeanTuple(np.array([0.2, 0.2, 0.2]))) == 1

    def test_strict_maximum(self):
        assert predict_class(MeanTuple(np.array([0.1, 0.9, 0.5]))) == 2

    def test_scale_invariance(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            values = rng.uniform(0, 1, size=4)
            assert predict_class(MeanTuple(values)) == predict_class(
                MeanTuple(values * 37.5)
            )


class TestBatchScoring:
    def test_matches_single_unit_path(self):
        rng = np.random.default_rng(5)
        raw = random_dataset(rng, 12, 4, 3)
        model = train_model(raw, PartitionParams(0.6, -0.1), 2)
        queries = rng.normal(size=(6, 4)) * 2
        batch = mean_tuples_matrix(queries, model)
        for i, row in enumerate(queries):
            assert classify_unit(row, model) == int(np.argmax(batch[i])) + 1
            from hypervote.preprocess import discretize_unit

            bins = discretize_unit(row, model.stats, model.params)
            keys = incidence_keys(bins, model.order, model.bin_min, model.bin_max)
            assert np.allclose(mean_tuple(keys, model).values, batch[i], atol=1e-15)
