"""Cross-validated evaluation: accuracy, confusion, sweeps and ablations.

Folds are stratified per class with a seeded round-robin assignment. Feature
statistics and the discretisation range are refit on each training fold so
held-out units never leak into the model. Model populations are trained once
per fold and reused across population sizes and thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .ensemble import EnsembleConfig, EnsembleModel, score_population, train_population
from .ruleout import TECHNIQUES, rule_out


@dataclass(frozen=True)
class FoldSpec:
    """Fold assignment (unit index -> fold index in [0, n_folds))."""

    n_folds: int
    assignments: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "assignments", np.asarray(self.assignments, dtype=np.int64)
        )


@dataclass(frozen=True)
class EvalReport:
    """Pooled cross-validation metrics.

    Confusion rows are output classes, columns true classes, counted over
    classified units only. Accuracy is the mean of per-fold accuracies over
    classified units; the standard error is their sample standard deviation
    divided by sqrt(n_folds).
    """

    accuracy: float
    standard_error: float
    confusion: np.ndarray
    true_positive_rate: np.ndarray
    false_positive_rate: np.ndarray
    true_negative_rate: np.ndarray
    false_negative_rate: np.ndarray
    classified_fraction: float
    fold_accuracies: tuple[float, ...]
    label_names: tuple[str, ...]


@dataclass(frozen=True)
class _FoldScores:
    """Raw per-fold prediction material reused by sweeps."""

    true_labels: np.ndarray
    votes: np.ndarray
    class_means: np.ndarray


def stratified_kfold(labels, n_folds: int, seed: int) -> FoldSpec:
    """Per-class shuffle + round-robin assignment; deterministic under seed."""
    labels = np.asarray(labels, dtype=np.int64)
    if n_folds < 2:
        raise ValueError("need at least 2 folds")
    rng = np.random.default_rng(seed)
    assignments = np.full(labels.shape[0], -1, dtype=np.int64)
    for k in range(1, int(labels.max()) + 1):
        units = np.flatnonzero(labels == k)
        if units.size < n_folds:
            raise ValueError(
                f"class {k} has {units.size} units, fewer than {n_folds} folds"
            )
        perm = rng.permutation(units)
        assignments[perm] = np.arange(perm.size) % n_folds
    return FoldSpec(n_folds, assignments)


def cross_validate(
    raw, config: EnsembleConfig, n_folds: int, seed: int, theta: float | None = None
) -> EvalReport:
    """Stratified k-fold evaluation of a model population on `raw`."""
    folds = _fold_scores(raw, config, n_folds, seed)
    return _build_report(folds, raw.n_classes, raw.label_names, theta)


def population_sweep(
    raw, config: EnsembleConfig, sizes, n_folds: int, seed: int
) -> list[tuple[int, EvalReport]]:
    """Evaluate prefixes of the trained model list at each requested size."""
    sizes = [int(s) for s in sizes]
    for s in sizes:
        if not 1 <= s <= config.population:
            raise ValueError(
                f"population size {s} outside [1, {config.population}]"
            )
    folds = _fold_scores(raw, config, n_folds, seed)
    out = []
    for s in sizes:
        prefix = [
            _FoldScores(f.true_labels, f.votes[:, :s], f.class_means[:, :s])
            for f in folds
        ]
        out.append((s, _build_report(prefix, raw.n_classes, raw.label_names, None)))
    return out


def threshold_sweep(
    raw, config: EnsembleConfig, thetas, n_folds: int, seed: int
) -> list[tuple[float, EvalReport]]:
    """Reports for each decision threshold, reusing one set of fold scores."""
    folds = _fold_scores(raw, config, n_folds, seed)
    return [
        (float(theta), _build_report(folds, raw.n_classes, raw.label_names, float(theta)))
        for theta in thetas
    ]


def ablation_run(
    raw,
    config: EnsembleConfig,
    n_folds: int,
    seed: int,
    drop=(),
    keep=None,
    theta: float | None = None,
) -> EvalReport:
    """Cross-validate on a column-restricted dataset.

    `drop` removes the given 1-based feature indices; `keep` (exclusive with
    drop) restricts to exactly the given indices. The restricted dataset must
    retain at least `config.order` features.
    """
    drop = sorted(set(int(j) for j in drop))
    if keep is not None and drop:
        raise ValueError("pass either drop or keep, not both")
    for j in drop or (keep or ()):
        if not 1 <= int(j) <= raw.n_features:
            raise ValueError(f"feature index {j} out of range")
    if keep is not None:
        kept = sorted(set(int(j) for j in keep))
    else:
        kept = [j for j in range(1, raw.n_features + 1) if j not in drop]
    if len(kept) < config.order:
        raise ValueError(
            f"{len(kept)} features left after restriction, fewer than the "
            f"interaction order {config.order}"
        )
    restricted = raw.select_features([j - 1 for j in kept])
    return cross_validate(restricted, config, n_folds, seed, theta)


def ruleout_sweep(
    raw,
    config: EnsembleConfig,
    technique: str,
    thresholds,
    n_folds: int,
    seed: int,
) -> list[tuple[float, float, float]]:
    """(threshold, hit rate, mean classes ruled out) rows for one technique.

    A hit means the unit's true class is in the kept set. Both metrics are
    pooled over all units of all folds.
    """
    if technique not in TECHNIQUES:
        raise ValueError(f"technique must be one of {TECHNIQUES}, got {technique!r}")
    folds = _fold_scores(raw, config, n_folds, seed)
    masses = []
    truths = []
    for f in folds:
        if technique == "prediction":
            counts = _vote_count_matrix(f.votes, raw.n_classes)
            mass = counts / f.votes.shape[1]
        else:
            mean = f.class_means.mean(axis=1)
            mass = mean / mean.sum(axis=1, keepdims=True)
        masses.append(mass)
        truths.append(f.true_labels)
    mass = np.vstack(masses)
    truth = np.concatenate(truths)
    rows = []
    for threshold in thresholds:
        hits = 0
        ruled = 0
        for i in range(mass.shape[0]):
            result = rule_out(mass[i], float(threshold))
            hits += int(truth[i]) in result.kept
            ruled += result.ruled_out_count
        n = mass.shape[0]
        rows.append((float(threshold), hits / n, ruled / n))
    return rows


def _fold_scores(
    raw, config: EnsembleConfig, n_folds: int, seed: int
) -> list[_FoldScores]:
    spec = stratified_kfold(raw.labels, n_folds, seed)
    folds = []
    for f in range(n_folds):
        test_mask = spec.assignments == f
        train = raw.subset(~test_mask)
        test = raw.subset(test_mask)
        ens = train_population(train, config)
        votes, means = score_population(test.values, ens)
        folds.append(_FoldScores(test.labels, votes, means))
    return folds


def _vote_count_matrix(votes: np.ndarray, n_classes: int) -> np.ndarray:
    nu, population = votes.shape
    counts = np.zeros((nu, n_classes), dtype=np.int64)
    np.add.at(counts, (np.repeat(np.arange(nu), population), votes.ravel() - 1), 1)
    return counts


def _vote_outcomes(votes: np.ndarray, n_classes: int, theta: float | None):
    """Final predictions (0 = unclassified) from a vote matrix."""
    counts = _vote_count_matrix(votes, n_classes)
    winner = np.argmax(counts, axis=1)
    fraction = counts[np.arange(len(winner)), winner] / votes.shape[1]
    pred = winner + 1
    if theta is not None:
        pred = np.where(fraction > theta, pred, 0)
    return pred.astype(np.int64)


def _build_report(
    folds: list[_FoldScores],
    n_classes: int,
    label_names,
    theta: float | None,
) -> EvalReport:
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    fold_accuracies = []
    classified = 0
    total = 0
    for f in folds:
        pred = _vote_outcomes(f.votes, n_classes, theta)
        true = f.true_labels
        mask = pred > 0
        total += true.size
        classified += int(mask.sum())
        if mask.any():
            fold_accuracies.append(float(np.mean(pred[mask] == true[mask])))
        np.add.at(confusion, (pred[mask] - 1, true[mask] - 1), 1)
    if fold_accuracies:
        accuracy = float(np.mean(fold_accuracies))
        if len(fold_accuracies) > 1:
            se = float(np.std(fold_accuracies, ddof=1) / sqrt(len(fold_accuracies)))
        else:
            se = 0.0
    else:
        accuracy = float("nan")
        se = float("nan")
    true_totals = confusion.sum(axis=0)
    output_totals = confusion.sum(axis=1)
    diag = np.diag(confusion)
    grand = confusion.sum()
    with np.errstate(invalid="ignore", divide="ignore"):
        tpr = diag / true_totals
        fpr = (output_totals - diag) / (grand - true_totals)
    return EvalReport(
        accuracy=accuracy,
        standard_error=se,
        confusion=confusion,
        true_positive_rate=tpr,
        false_positive_rate=fpr,
        true_negative_rate=1.0 - fpr,
        false_negative_rate=1.0 - tpr,
        classified_fraction=classified / total if total else float("nan"),
        fold_accuracies=tuple(fold_accuracies),
        label_names=tuple(label_names),
    )
