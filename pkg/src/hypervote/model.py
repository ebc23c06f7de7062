"""Sparse hypergraph model construction.

A trained model maps hyperedges — interval cells over combinations of
``order`` features — to class distributions. Hyperedges are stored in a
sorted associative structure keyed by an integer encoding that coincides
with the column index of the dense incidence expansion, so the sparse and
dense routes are comparable column for column. Hyperedges never touched by
training data are not stored; looking one up yields the uniform
distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import NamedTuple

import numpy as np

from . import kernels
from .blockmat import BlockMatrix, restricted_face_power
from .errors import DataError
from .preprocess import (
    DiscretizedDataset,
    FeatureStats,
    PartitionParams,
    discretize,
    fit_stats,
    zscore,
)

# Encoded keys must stay well inside int64; this caps n_combos * n_bins**order.
_KEY_CAPACITY = 2**62


class HyperedgeKey(NamedTuple):
    """A hyperedge: 1-based feature indices (strictly increasing) + their bins."""

    features: tuple[int, ...]
    bins: tuple[int, ...]


@dataclass(frozen=True)
class LabeledPartition:
    """Disjoint per-class unit index sets covering a training set."""

    class_units: tuple[np.ndarray, ...]

    def __post_init__(self):
        sets = tuple(np.asarray(u, dtype=np.int64) for u in self.class_units)
        if not sets:
            raise ValueError("at least one class is required")
        for k, units in enumerate(sets):
            if units.size == 0:
                raise ValueError(f"class {k + 1} has no units")
        all_units = np.concatenate(sets)
        if np.unique(all_units).size != all_units.size:
            raise ValueError("class unit sets overlap")
        object.__setattr__(self, "class_units", sets)

    @classmethod
    def from_labels(cls, labels, n_classes: int) -> "LabeledPartition":
        labels = np.asarray(labels, dtype=np.int64)
        return cls(
            tuple(np.flatnonzero(labels == k + 1) for k in range(n_classes))
        )

    @property
    def n_classes(self) -> int:
        return len(self.class_units)

    @property
    def counts(self) -> np.ndarray:
        return np.array([u.size for u in self.class_units], dtype=np.int64)


def feature_combinations(n_features: int, order: int) -> np.ndarray:
    """All strictly increasing feature index combinations, lexicographic, 0-based."""
    if not 1 <= order <= n_features:
        raise ValueError(
            f"interaction order {order} out of range for {n_features} features"
        )
    return np.array(list(combinations(range(n_features), order)), dtype=np.int64)


def _check_key_capacity(n_features: int, order: int, n_bins: int) -> None:
    if comb(n_features, order) * n_bins**order >= _KEY_CAPACITY:
        raise DataError(
            f"hyperedge space too large to encode: {n_features} features, "
            f"order {order}, {n_bins} bins"
        )


@dataclass(frozen=True)
class HypergraphModel:
    """One trained hyperedge-to-class-distribution map.

    ``keys`` holds the sorted encoded hyperedge ids, ``weights`` the aligned
    class distributions (each row sums to 1). Absent keys denote the uniform
    distribution.
    """

    order: int
    params: PartitionParams
    stats: FeatureStats
    bin_min: int
    bin_max: int
    class_counts: np.ndarray
    keys: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        class_counts = np.asarray(self.class_counts, dtype=np.int64)
        keys = np.asarray(self.keys, dtype=np.int64)
        weights = np.asarray(self.weights, dtype=float)
        if weights.shape != (keys.size, class_counts.size):
            raise ValueError("weights must be (n_keys, n_classes)")
        object.__setattr__(self, "class_counts", class_counts)
        object.__setattr__(self, "keys", keys)
        object.__setattr__(self, "weights", weights)

    @property
    def n_features(self) -> int:
        return self.stats.n_features

    @property
    def n_classes(self) -> int:
        return self.class_counts.size

    @property
    def n_bins(self) -> int:
        return self.bin_max - self.bin_min + 1

    def encode_key(self, key: HyperedgeKey) -> int:
        """Integer id of a hyperedge, or -1 if any bin is out of range."""
        features = tuple(key.features)
        if len(features) != self.order or list(features) != sorted(set(features)):
            raise ValueError(
                f"key features must be {self.order} strictly increasing indices"
            )
        if features[0] < 1 or features[-1] > self.n_features:
            raise ValueError(f"feature indices out of range: {features}")
        combo = tuple(f - 1 for f in features)
        rank = _combination_rank(combo, self.n_features)
        encoded = 0
        for b in key.bins:
            rel = b - self.bin_min
            if rel < 0 or rel >= self.n_bins:
                return -1
            encoded = encoded * self.n_bins + rel
        return rank * self.n_bins**self.order + encoded

    def weight_row(self, key: HyperedgeKey) -> np.ndarray:
        """Stored class distribution for a hyperedge; uniform if absent."""
        encoded = self.encode_key(key)
        if encoded >= 0:
            pos = np.searchsorted(self.keys, encoded)
            if pos < self.keys.size and self.keys[pos] == encoded:
                return self.weights[pos].copy()
        return np.full(self.n_classes, 1.0 / self.n_classes)

    def hyperedges(self):
        """Yield (HyperedgeKey, class distribution) for every stored hyperedge."""
        combos = feature_combinations(self.n_features, self.order)
        block = self.n_bins**self.order
        for encoded, row in zip(self.keys, self.weights):
            rank, local = divmod(int(encoded), block)
            bins = []
            for _ in range(self.order):
                local, rel = divmod(local, self.n_bins)
                bins.append(rel + self.bin_min)
            bins.reverse()
            features = tuple(int(j) + 1 for j in combos[rank])
            yield HyperedgeKey(features, tuple(bins)), row


def _combination_rank(combo: tuple[int, ...], n_features: int) -> int:
    """Lexicographic rank of a strictly increasing 0-based combination."""
    rank = 0
    prev = -1
    k = len(combo)
    for pos, c in enumerate(combo):
        for skipped in range(prev + 1, c):
            rank += comb(n_features - skipped - 1, k - pos - 1)
        prev = c
    return rank


def build_incidence_dense(dset: DiscretizedDataset) -> BlockMatrix:
    """Binary unit-by-hyperedge incidence matrix, one width-n_bins block per feature."""
    bins = dset.bins
    n, m = bins.shape
    n_bins = dset.n_bins
    out = np.zeros((n, n_bins * m))
    rows = np.repeat(np.arange(n), m)
    cols = (np.arange(m) * n_bins)[None, :] + (bins - dset.bin_min)
    out[rows, cols.ravel()] = 1.0
    return BlockMatrix(out, (n_bins,) * m)


def eta_incidence_dense(b: BlockMatrix, order: int) -> BlockMatrix:
    """Incidence matrix of the order-`order` intersection hypergraph (dense)."""
    return restricted_face_power(b, order)


def build_weights(keys_per_unit, partition: LabeledPartition) -> dict:
    """Reference weight-map construction from explicit per-unit key collections.

    For every hyperedge touched by any unit: per-class incidence proportions,
    then row-normalised. Implemented with plain dictionaries, independently of
    the array kernels, so the two routes can check each other.
    """
    counts: dict[HyperedgeKey, np.ndarray] = {}
    n_classes = partition.n_classes
    unit_class = {}
    for k, units in enumerate(partition.class_units):
        for i in units:
            unit_class[int(i)] = k
    for i, unit_keys in enumerate(keys_per_unit):
        k = unit_class[i]
        for key in unit_keys:
            if key not in counts:
                counts[key] = np.zeros(n_classes)
            counts[key][k] += 1.0
    class_sizes = partition.counts.astype(float)
    weights = {}
    for key, cnt in counts.items():
        proportions = cnt / class_sizes
        weights[key] = proportions / proportions.sum()
    return weights


def unit_keys(bins_row, order: int) -> list[HyperedgeKey]:
    """The C(m, order) hyperedge keys of one discretised unit."""
    bins_row = np.asarray(bins_row, dtype=np.int64)
    m = bins_row.shape[0]
    return [
        HyperedgeKey(tuple(j + 1 for j in combo), tuple(int(bins_row[j]) for j in combo))
        for combo in combinations(range(m), order)
    ]


def train_model(raw, params: PartitionParams, order: int) -> HypergraphModel:
    """Fit statistics, discretise, and build one sparse hypergraph model."""
    return train_models(raw, [params], order)[0]


def train_models(raw, params_list, order: int) -> list[HypergraphModel]:
    """Train one model per parameter set, sharing the fitted statistics.

    The sparse path enumerates each unit's C(m, order) keys directly and never
    materialises the dense incidence expansion.
    """
    if not 1 <= order <= raw.n_features:
        raise ValueError(
            f"interaction order {order} out of range for {raw.n_features} features"
        )
    partition = LabeledPartition.from_labels(raw.labels, raw.n_classes)
    stats = fit_stats(raw)
    z = zscore(raw, stats)
    combos = feature_combinations(raw.n_features, order)
    labels0 = raw.labels - 1
    class_sizes = partition.counts.astype(float)
    models = []
    for params in params_list:
        dset = discretize(z, params)
        _check_key_capacity(raw.n_features, order, dset.n_bins)
        keys = kernels.encode_keys(dset.bins, combos, dset.bin_min, dset.n_bins)
        uniq, counts = kernels.count_class_incidence(keys, labels0, raw.n_classes)
        proportions = counts / class_sizes[None, :]
        weights = proportions / proportions.sum(axis=1, keepdims=True)
        models.append(
            HypergraphModel(
                order=order,
                params=params,
                stats=stats,
                bin_min=dset.bin_min,
                bin_max=dset.bin_max,
                class_counts=partition.counts,
                keys=uniq,
                weights=weights,
            )
        )
    return models
