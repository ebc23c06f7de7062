"""Feature normalisation to z-scores and interval discretisation.

Features are standardised column-wise, then each score is mapped to the
integer index of the half-open interval ``((t-1)*width + origin,
t*width + origin]`` containing it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, DimensionError


@dataclass(frozen=True)
class FeatureStats:
    """Per-feature mean and sample standard deviation of a training set."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        std = np.asarray(self.std, dtype=float)
        if mean.ndim != 1 or std.ndim != 1 or mean.shape != std.shape:
            raise DimensionError("mean and std must be 1-D arrays of equal length")
        if np.any(std < 0):
            raise ValueError("standard deviations must be non-negative")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", std)

    @property
    def n_features(self) -> int:
        return self.mean.shape[0]


@dataclass(frozen=True)
class PartitionParams:
    """Interval width and origin translation of the discretisation grid."""

    width: float
    origin: float

    def __post_init__(self):
        if not (float(self.width) > 0):
            raise ValueError(f"interval width must be positive, got {self.width}")
        object.__setattr__(self, "width", float(self.width))
        object.__setattr__(self, "origin", float(self.origin))


@dataclass(frozen=True)
class DiscretizedDataset:
    """Integer bin indices for a dataset plus the observed bin range."""

    bins: np.ndarray
    bin_min: int
    bin_max: int

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.int64)
        if bins.ndim != 2:
            raise ValueError("bins must be a 2-D integer array")
        if bins.size and (bins.min() < self.bin_min or bins.max() > self.bin_max):
            raise ValueError("bin entries fall outside [bin_min, bin_max]")
        object.__setattr__(self, "bins", bins)

    @property
    def n_bins(self) -> int:
        return self.bin_max - self.bin_min + 1


def fit_stats(raw) -> FeatureStats:
    """Column means and sample standard deviations (n-1 divisor) of `raw`."""
    values = raw.values
    if values.shape[0] < 2:
        raise ValueError("need at least 2 units to fit feature statistics")
    return FeatureStats(values.mean(axis=0), values.std(axis=0, ddof=1))


def zscore_values(values: np.ndarray, stats: FeatureStats) -> np.ndarray:
    """Standardise a (n, m) array; constant features (std 0) map to all zeros."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[1] != stats.n_features:
        raise DimensionError(
            f"expected {stats.n_features} feature columns, got shape {values.shape}"
        )
    z = np.zeros_like(values)
    nz = stats.std > 0
    z[:, nz] = (values[:, nz] - stats.mean[nz]) / stats.std[nz]
    return z


def zscore(raw, stats: FeatureStats) -> np.ndarray:
    """Standardise every unit of `raw` using the supplied training statistics."""
    return zscore_values(raw.values, stats)


def bin_indices(z: np.ndarray, params: PartitionParams) -> np.ndarray:
    """Map z-scores to integer interval indices: ceil((z - origin) / width)."""
    return np.ceil((np.asarray(z, dtype=float) - params.origin) / params.width).astype(
        np.int64
    )


def discretize(z: np.ndarray, params: PartitionParams) -> DiscretizedDataset:
    """Discretise a z-score matrix and record the observed bin range."""
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise DataError("z-score matrix contains non-finite entries")
    if z.size == 0:
        raise ValueError("cannot discretize an empty matrix")
    bins = bin_indices(z, params)
    return DiscretizedDataset(bins, int(bins.min()), int(bins.max()))


def discretize_unit(
    values_row, stats: FeatureStats, params: PartitionParams
) -> np.ndarray:
    """Standardise and discretise one raw measurement tuple.

    Uses the training statistics as-is; the result may fall outside the
    training bin range, which prediction treats as missing evidence.
    """
    row = np.asarray(values_row, dtype=float)
    if row.ndim != 1 or row.shape[0] != stats.n_features:
        raise DimensionError(
            f"expected a tuple of {stats.n_features} measurements, got shape {row.shape}"
        )
    if not np.all(np.isfinite(row)):
        raise DataError("measurement tuple contains non-finite entries")
    z = zscore_values(row[None, :], stats)
    return bin_indices(z, params)[0]
