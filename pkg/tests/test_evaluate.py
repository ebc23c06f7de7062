import numpy as np
import pytest

from hypervote.data_io import RawDataset
from hypervote.ensemble import EnsembleConfig
from hypervote.evaluate import (
    ablation_run,
    cross_validate,
    population_sweep,
    ruleout_sweep,
    stratified_kfold,
    threshold_sweep,
)
from hypervote.synth import gaussian_mixture

from conftest import random_dataset

_SMALL = EnsembleConfig(n_widths=4, n_origins=3, order=1, seed=17)


def _separable(n_per_class=30, seed=0):
    """Three classes occupying disjoint value ranges on every feature."""
    rng = np.random.default_rng(seed)
    blocks = [rng.uniform(10 * k, 10 * k + 1, size=(n_per_class, 3)) for k in range(3)]
    labels = np.repeat([1, 2, 3], n_per_class)
    return RawDataset(
        np.vstack(blocks), labels, ("f1", "f2", "f3"), ("a", "b", "c")
    )


class TestStratifiedKfold:
    def test_iris_exact_split(self, iris):
        spec = stratified_kfold(iris.labels, 5, seed=0)
        for fold in range(5):
            for k in (1, 2, 3):
                in_fold = np.sum((spec.assignments == fold) & (iris.labels == k))
                assert in_fold == 10

    def test_uneven_class_round_robin(self):
        labels = np.ones(123, dtype=np.int64)
        spec = stratified_kfold(labels, 5, seed=3)
        sizes = sorted(np.bincount(spec.assignments, minlength=5))
        assert sizes == [24, 24, 25, 25, 25]

    def test_deterministic(self):
        labels = np.repeat([1, 2], 20)
        a = stratified_kfold(labels, 4, seed=9)
        b = stratified_kfold(labels, 4, seed=9)
        assert np.array_equal(a.assignments, b.assignments)

    def test_class_smaller_than_fold_count(self):
        labels = np.array([1, 1, 1, 2, 2])
        with pytest.raises(ValueError):
            stratified_kfold(labels, 3, seed=0)


class TestCrossValidate:
    def test_separable_data_is_perfect(self):
        report = cross_validate(_separable(), _SMALL, 5, seed=1)
        assert report.accuracy == 1.0
        assert np.array_equal(report.confusion, np.diag(report.confusion.diagonal()))
        assert report.classified_fraction == 1.0

    def test_zero_threshold_equals_unthresholded(self):
        raw = _separable(n_per_class=20, seed=2)
        plain = cross_validate(raw, _SMALL, 4, seed=5)
        gated = cross_validate(raw, _SMALL, 4, seed=5, theta=0.0)
        assert plain.accuracy == gated.accuracy
        assert np.array_equal(plain.confusion, gated.confusion)
        assert gated.classified_fraction == 1.0

    def test_rate_identities(self):
        rng = np.random.default_rng(3)
        raw = random_dataset(rng, 60, 3, 3)
        report = cross_validate(raw, _SMALL, 3, seed=7)
        ok = ~np.isnan(report.true_positive_rate)
        assert np.allclose(
            report.true_positive_rate[ok] + report.false_negative_rate[ok], 1.0
        )
        assert np.allclose(
            report.true_negative_rate + report.false_positive_rate, 1.0
        )

    def test_confusion_reconciles_with_rates(self):
        raw = gaussian_mixture(3, 4, 25, separation=1.0, seed=4)
        report = cross_validate(raw, _SMALL, 5, seed=2)
        conf = report.confusion
        total = conf.sum()
        for k in range(3):
            true_k = conf[:, k].sum()
            predicted_k = conf[k, :].sum()
            tpr = conf[k, k] / true_k
            fpr = (predicted_k - conf[k, k]) / (total - true_k)
            assert abs(tpr - report.true_positive_rate[k]) < 1e-3
            assert abs(fpr - report.false_positive_rate[k]) < 1e-3

    def test_report_is_reproducible(self):
        raw = gaussian_mixture(2, 3, 20, separation=1.5, seed=8)
        a = cross_validate(raw, _SMALL, 4, seed=6)
        b = cross_validate(raw, _SMALL, 4, seed=6)
        assert a.accuracy == b.accuracy
        assert a.fold_accuracies == b.fold_accuracies
        assert np.array_equal(a.confusion, b.confusion)


class TestPopulationSweep:
    def test_full_size_equals_cross_validate(self):
        raw = _separable(n_per_class=15, seed=5)
        [(size, report)] = population_sweep(raw, _SMALL, [_SMALL.population], 3, seed=4)
        reference = cross_validate(raw, _SMALL, 3, seed=4)
        assert size == _SMALL.population
        assert report.accuracy == reference.accuracy
        assert np.array_equal(report.confusion, reference.confusion)

    def test_prefix_sizes(self):
        raw = _separable(n_per_class=15, seed=6)
        results = population_sweep(raw, _SMALL, [1, _SMALL.population], 3, seed=4)
        assert [s for s, _ in results] == [1, 12]

    def test_oversized_request_rejected(self):
        raw = _separable(n_per_class=15, seed=7)
        with pytest.raises(ValueError):
            population_sweep(raw, _SMALL, [_SMALL.population + 1], 3, seed=4)


class TestThresholdSweep:
    def test_coverage_monotone_and_zero_classifies_all(self):
        raw = gaussian_mixture(3, 3, 20, separation=0.6, seed=9)
        rows = threshold_sweep(raw, _SMALL, [0.0, 0.25, 0.5, 0.75, 0.9], 4, seed=3)
        fractions = [report.classified_fraction for _, report in rows]
        assert fractions[0] == 1.0
        assert all(a >= b for a, b in zip(fractions, fractions[1:]))


class TestAblation:
    def test_drop_nothing_equals_cross_validate(self):
        raw = _separable(n_per_class=15, seed=8)
        report = ablation_run(raw, _SMALL, 3, seed=2)
        reference = cross_validate(raw, _SMALL, 3, seed=2)
        assert report.accuracy == reference.accuracy

    def test_drop_single_feature_runs(self):
        raw = _separable(n_per_class=15, seed=9)
        report = ablation_run(raw, _SMALL, 3, seed=2, drop=[2])
        assert 0.0 <= report.accuracy <= 1.0

    def test_keep_set(self):
        raw = _separable(n_per_class=15, seed=10)
        report = ablation_run(raw, _SMALL, 3, seed=2, keep=[1, 3])
        assert 0.0 <= report.accuracy <= 1.0

    def test_too_few_features_left(self):
        raw = _separable(n_per_class=15, seed=11)
        config = EnsembleConfig(n_widths=2, n_origins=2, order=2, seed=1)
        with pytest.raises(ValueError):
            ablation_run(raw, config, 3, seed=2, drop=[1, 2])

    def test_drop_and_keep_exclusive(self):
        raw = _separable(n_per_class=15, seed=12)
        with pytest.raises(ValueError):
            ablation_run(raw, _SMALL, 3, seed=2, drop=[1], keep=[2])


class TestRuleoutSweep:
    def test_hit_rate_monotone_both_techniques(self):
        raw = gaussian_mixture(3, 3, 20, separation=0.8, seed=13)
        grid = [0.3, 0.5, 0.7, 0.9, 1.0]
        for technique in ("prediction", "distribution"):
            rows = ruleout_sweep(raw, _SMALL, technique, grid, 3, seed=5)
            hits = [h for _, h, _ in rows]
            ruled = [r for _, _, r in rows]
            assert all(a <= b for a, b in zip(hits, hits[1:]))
            assert all(a >= b for a, b in zip(ruled, ruled[1:]))

    def test_full_mass_hit_means_any_vote(self):
        raw = gaussian_mixture(3, 3, 20, separation=0.5, seed=14)
        [(_, hit_rate, _)] = ruleout_sweep(raw, _SMALL, "prediction", [1.0], 3, seed=6)
        # reproduce from the raw fold votes
        from hypervote.evaluate import _fold_scores, _vote_count_matrix

        folds = _fold_scores(raw, _SMALL, 3, seed=6)
        got = []
        for f in folds:
            counts = _vote_count_matrix(f.votes, raw.n_classes)
            got.extend(counts[np.arange(len(f.true_labels)), f.true_labels - 1] > 0)
        assert hit_rate == pytest.approx(np.mean(got))

    def test_unknown_technique(self):
        raw = _separable(n_per_class=15, seed=15)
        with pytest.raises(ValueError):
            ruleout_sweep(raw, _SMALL, "magic", [0.5], 3, seed=0)
