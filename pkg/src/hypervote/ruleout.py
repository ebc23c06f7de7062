"""Narrowing predictions to a class subset instead of a single class.

Two sources of per-class mass are supported: normalised vote frequencies
(technique "prediction") and the population mean of the per-model class-mean
tuples, renormalised to a distribution (technique "distribution"). Either
way, classes are kept greedily by descending mass until the cumulative mass
reaches the threshold; the rest are ruled out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensemble import PredictionRecord, vote_counts

TECHNIQUES = ("prediction", "distribution")

# Guards the cumulative comparison against float round-off in masses that
# should sum to exactly 1.
_MASS_TOL = 1e-12


@dataclass(frozen=True)
class RuleOutResult:
    """Kept classes (descending mass, 1-based) and how many were ruled out."""

    kept: tuple[int, ...]
    ruled_out_count: int
    threshold: float


def vote_frequencies(rec: PredictionRecord) -> np.ndarray:
    """Fraction of population votes received by each class."""
    return vote_counts(rec) / rec.population


def mean_distribution(rec: PredictionRecord) -> np.ndarray:
    """Element-wise mean of the per-model class-mean tuples, renormalised.

    Raw class-mean tuples are means over mostly-empty dense rows and do not
    sum to 1; renormalising makes the threshold comparable with
    :func:`vote_frequencies`.
    """
    mean = rec.class_means.mean(axis=0)
    total = mean.sum()
    if total <= 0:
        return np.full(rec.n_classes, 1.0 / rec.n_classes)
    return mean / total


def rule_out(freq, threshold: float) -> RuleOutResult:
    """Keep the minimal descending-mass class prefix reaching `threshold`.

    Ties in mass are broken toward the lower class index. `threshold` must
    lie in (0, 1]; masses are assumed to sum to 1.
    """
    freq = np.asarray(freq, dtype=float)
    if not 0 < threshold <= 1:
        raise ValueError(f"rule-out threshold must lie in (0, 1], got {threshold}")
    n_classes = freq.shape[0]
    order = np.lexsort((np.arange(n_classes), -freq))
    cumulative = np.cumsum(freq[order])
    cut = int(np.searchsorted(cumulative, threshold - _MASS_TOL))
    cut = min(cut, n_classes - 1)
    kept = tuple(int(k) + 1 for k in order[: cut + 1])
    return RuleOutResult(kept, n_classes - len(kept), float(threshold))
