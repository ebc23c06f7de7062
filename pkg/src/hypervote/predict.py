"""Single-model classification of unlabelled units.

A unit is discretised with the model's training statistics and partition,
its hyperedge keys are looked up, and the stored class distributions are
averaged over the full dense hyperedge space. Absent and out-of-range
hyperedges contribute the uniform distribution; since that adds the same
amount to every class, it never changes the argmax.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import kernels
from .model import HyperedgeKey, HypergraphModel, feature_combinations, unit_keys
from .preprocess import bin_indices, discretize_unit, zscore_values


@dataclass(frozen=True)
class IncidenceKeys:
    """All C(m, order) hyperedge keys of one unit, in combination order."""

    keys: tuple[HyperedgeKey, ...]
    out_of_range: int


@dataclass(frozen=True)
class MeanTuple:
    """Per-class mean of the unit's hyperedge distributions over the dense space."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


def incidence_keys(
    unit_bins, order: int, bin_min: int, bin_max: int
) -> IncidenceKeys:
    """Enumerate a discretised unit's hyperedge keys, counting out-of-range ones.

    Out-of-range keys (any bin outside the training range) are retained; the
    caller decides how to weight them.
    """
    keys = unit_keys(unit_bins, order)
    oor = sum(
        1 for key in keys if any(b < bin_min or b > bin_max for b in key.bins)
    )
    return IncidenceKeys(tuple(keys), oor)


def dense_row_count(n_features: int, order: int, n_bins: int) -> float:
    """Rows of the fully materialised hyperedge weight array: C(m, order) * n_bins**order."""
    return comb(n_features, order) * float(n_bins) ** order


def mean_tuple(keys: IncidenceKeys, model: HypergraphModel) -> MeanTuple:
    """Average the class distributions selected by a unit's incidence keys.

    The divisor is the dense row count, so values match a dense
    diag(incidence) @ weights column mean.
    """
    expected = comb(model.n_features, model.order)
    if len(keys.keys) != expected or any(
        len(k.features) != model.order for k in keys.keys
    ):
        raise ValueError(
            f"incidence keys do not match model order {model.order} over "
            f"{model.n_features} features"
        )
    total = np.zeros(model.n_classes)
    for key in keys.keys:
        total += model.weight_row(key)
    return MeanTuple(total / dense_row_count(model.n_features, model.order, model.n_bins))


def predict_class(mt: MeanTuple) -> int:
    """Class with the greatest mean mass (1-based); ties go to the lowest index."""
    return int(np.argmax(mt.values)) + 1


def classify_unit(values_row, model: HypergraphModel) -> int:
    """Discretise, score and classify one raw measurement tuple."""
    bins = discretize_unit(values_row, model.stats, model.params)
    keys = incidence_keys(bins, model.order, model.bin_min, model.bin_max)
    return predict_class(mean_tuple(keys, model))


def mean_tuples_matrix(values, model: HypergraphModel) -> np.ndarray:
    """Vectorised :func:`mean_tuple` for a (n, m) batch of raw units."""
    z = zscore_values(np.asarray(values, dtype=float), model.stats)
    bins = bin_indices(z, model.params)
    combos = feature_combinations(model.n_features, model.order)
    keys = kernels.encode_keys(bins, combos, model.bin_min, model.n_bins)
    total = kernels.sum_weight_rows(keys, model.keys, model.weights, model.n_classes)
    return total / dense_row_count(model.n_features, model.order, model.n_bins)
