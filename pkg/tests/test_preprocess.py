import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypervote.data_io import RawDataset
from hypervote.errors import DataError, DimensionError
from hypervote.preprocess import (
    FeatureStats,
    PartitionParams,
    bin_indices,
    discretize,
    discretize_unit,
    fit_stats,
    zscore,
    zscore_values,
)


def _dataset(values):
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    return RawDataset(
        values,
        np.ones(n, dtype=np.int64),
        tuple(f"f{j}" for j in range(values.shape[1])),
        ("only",),
    )


class TestFitStats:
    def test_simple_column(self):
        stats = fit_stats(_dataset([[1.0], [2.0], [3.0]]))
        assert stats.mean[0] == pytest.approx(2.0)
        assert stats.std[0] == pytest.approx(1.0)  # n-1 divisor

    def test_constant_column(self):
        stats = fit_stats(_dataset([[5.0], [5.0], [5.0]]))
        assert stats.mean[0] == 5.0
        assert stats.std[0] == 0.0

    def test_iris_sepal_length_mean(self, iris):
        stats = fit_stats(iris)
        assert stats.mean[0] == pytest.approx(5.8433, abs=1e-3)

    def test_single_unit_rejected(self):
        with pytest.raises(ValueError):
            fit_stats(_dataset([[1.0, 2.0]]))


class TestZscore:
    def test_direct_evaluation(self):
        stats = FeatureStats(np.array([5.0]), np.array([2.0]))
        assert zscore_values(np.array([[7.0]]), stats)[0, 0] == 1.0

    def test_mean_maps_to_zero(self):
        stats = FeatureStats(np.array([5.0]), np.array([2.0]))
        assert zscore_values(np.array([[5.0]]), stats)[0, 0] == 0.0

    def test_constant_feature_maps_to_zero(self):
        stats = FeatureStats(np.array([5.0]), np.array([0.0]))
        assert np.array_equal(
            zscore_values(np.array([[1.0], [99.0]]), stats), [[0.0], [0.0]]
        )

    def test_dimension_mismatch(self):
        stats = FeatureStats(np.zeros(3), np.ones(3))
        with pytest.raises(DimensionError):
            zscore_values(np.zeros((2, 2)), stats)

    def test_training_scores_standardised(self, iris):
        stats = fit_stats(iris)
        z = zscore(iris, stats)
        assert np.all(np.abs(z.mean(axis=0)) < 1e-9)
        assert np.all(np.abs(z.std(axis=0, ddof=1) - 1.0) < 1e-9)


class TestDiscretize:
    def test_ceiling(self):
        out = discretize(np.array([[0.3]]), PartitionParams(0.5, 0.0))
        assert out.bins[0, 0] == 1

    def test_origin_maps_to_zero(self):
        out = discretize(np.array([[0.7]]), PartitionParams(2.0, 0.7))
        assert out.bins[0, 0] == 0

    def test_range_and_bin_count(self):
        out = discretize(np.array([[-0.9, 0.1, 1.2]]), PartitionParams(1.0, 0.0))
        assert np.array_equal(out.bins, [[0, 1, 2]])
        assert (out.bin_min, out.bin_max, out.n_bins) == (0, 2, 3)

    def test_non_finite_rejected(self):
        with pytest.raises(DataError):
            discretize(np.array([[np.nan]]), PartitionParams(1.0, 0.0))

    def test_width_must_be_positive(self):
        with pytest.raises(ValueError):
            PartitionParams(0.0, 0.0)


class TestDiscretizeUnit:
    def test_unit_at_training_means(self):
        stats = FeatureStats(np.array([2.0, -1.0]), np.array([3.0, 0.5]))
        params = PartitionParams(0.4, -0.3)
        out = discretize_unit(np.array([2.0, -1.0]), stats, params)
        expected = int(np.ceil(0.3 / 0.4))
        assert np.array_equal(out, [expected, expected])

    def test_direct_example(self):
        stats = FeatureStats(np.array([5.0]), np.array([2.0]))
        out = discretize_unit(np.array([7.0]), stats, PartitionParams(0.5, 0.0))
        assert out[0] == 2

    def test_far_outside_training_range(self):
        stats = FeatureStats(np.array([0.0]), np.array([1.0]))
        out = discretize_unit(np.array([10.0]), stats, PartitionParams(0.5, 0.0))
        assert out[0] == 20

    def test_length_mismatch(self):
        stats = FeatureStats(np.zeros(2), np.ones(2))
        with pytest.raises(DimensionError):
            discretize_unit(np.array([1.0]), stats, PartitionParams(1.0, 0.0))


@settings(max_examples=60, deadline=None)
@given(
    z=st.floats(-50, 50),
    width=st.floats(0.01, 5.0),
    origin=st.floats(-2.0, 2.0),
)
def test_score_lies_in_its_interval(z, width, origin):
    params = PartitionParams(width, origin)
    d = int(bin_indices(np.array([[z]]), params)[0, 0])
    q = (z - origin) / width
    assert d - 1 < q <= d


@settings(max_examples=60, deadline=None)
@given(
    pair=st.tuples(st.floats(-50, 50), st.floats(-50, 50)),
    width=st.floats(0.01, 5.0),
    origin=st.floats(-2.0, 2.0),
)
def test_discretization_is_monotonic(pair, width, origin):
    lo, hi = sorted(pair)
    params = PartitionParams(width, origin)
    bins = bin_indices(np.array([[lo, hi]]), params)
    assert bins[0, 0] <= bins[0, 1]


@settings(max_examples=40, deadline=None)
@given(
    data=st.lists(
        st.lists(st.floats(-100, 100), min_size=2, max_size=4),
        min_size=1,
        max_size=12,
    ).filter(lambda rows: len({len(r) for r in rows}) == 1),
    width=st.floats(0.05, 3.0),
    origin=st.floats(-1.0, 1.0),
)
def test_bin_count_identity(data, width, origin):
    out = discretize(np.array(data), PartitionParams(width, origin))
    assert out.n_bins == out.bin_max - out.bin_min + 1
    assert out.bins.min() >= out.bin_min
    assert out.bins.max() <= out.bin_max
