"""Model populations: parameter sampling, training, vote aggregation.

A population is built from the Cartesian product of independently sampled
interval widths and origins. Each member model votes for a class per unit;
the final prediction is the modal vote, optionally gated by a decision
threshold on the winning vote fraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import HypergraphModel, train_models
from .parallel import parallel_map
from .predict import mean_tuples_matrix
from .preprocess import PartitionParams

DEFAULT_WIDTH_BOUNDS = (0.2, 1.5)
DEFAULT_ORIGIN_BOUNDS = (-0.5, 0.5)
DEFAULT_THETA = 0.75


@dataclass(frozen=True)
class EnsembleConfig:
    """Sampling configuration of a model population."""

    n_widths: int
    n_origins: int
    order: int
    width_bounds: tuple[float, float] = DEFAULT_WIDTH_BOUNDS
    origin_bounds: tuple[float, float] = DEFAULT_ORIGIN_BOUNDS
    seed: int = 0

    def __post_init__(self):
        if self.n_widths < 1 or self.n_origins < 1:
            raise ValueError("population requires at least one width and one origin")
        if self.order < 1:
            raise ValueError("interaction order must be >= 1")
        wlo, whi = self.width_bounds
        olo, ohi = self.origin_bounds
        if not (wlo > 0):
            raise ValueError("interval width lower bound must be positive")
        if wlo > whi or olo > ohi:
            raise ValueError("bounds must satisfy low <= high")
        object.__setattr__(self, "width_bounds", (float(wlo), float(whi)))
        object.__setattr__(self, "origin_bounds", (float(olo), float(ohi)))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def population(self) -> int:
        return self.n_widths * self.n_origins


@dataclass(frozen=True)
class EnsembleModel:
    """A trained population plus the metadata needed to classify raw rows."""

    config: EnsembleConfig
    models: tuple[HypergraphModel, ...]
    feature_names: tuple[str, ...]
    label_names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "label_names", tuple(self.label_names))
        if len(self.models) != self.config.population:
            raise ValueError(
                f"expected {self.config.population} models, got {len(self.models)}"
            )

    @property
    def n_classes(self) -> int:
        return self.models[0].n_classes

    @property
    def n_features(self) -> int:
        return self.models[0].n_features


@dataclass(frozen=True)
class PredictionRecord:
    """Per-model votes and class-mean tuples for one unit."""

    votes: np.ndarray
    class_means: np.ndarray

    def __post_init__(self):
        votes = np.asarray(self.votes, dtype=np.int64)
        class_means = np.asarray(self.class_means, dtype=float)
        if votes.ndim != 1 or class_means.shape[0] != votes.shape[0]:
            raise ValueError("votes and class_means must cover the same models")
        object.__setattr__(self, "votes", votes)
        object.__setattr__(self, "class_means", class_means)

    @property
    def population(self) -> int:
        return self.votes.shape[0]

    @property
    def n_classes(self) -> int:
        return self.class_means.shape[1]


def sample_params(config: EnsembleConfig) -> list[PartitionParams]:
    """Draw widths and origins and return their Cartesian product, width-major.

    All widths are drawn first, then all origins, from one seeded generator,
    so equal seeds give identical parameter lists.
    """
    rng = np.random.default_rng(config.seed)
    widths = rng.uniform(*config.width_bounds, config.n_widths)
    origins = rng.uniform(*config.origin_bounds, config.n_origins)
    return [
        PartitionParams(width, origin) for width in widths for origin in origins
    ]


def train_population(raw, config: EnsembleConfig) -> EnsembleModel:
    """Train one model per sampled parameter pair, in sampling order."""
    params = sample_params(config)
    chunks = _chunk(params)
    trained = parallel_map(lambda chunk: train_models(raw, chunk, config.order), chunks)
    models = [model for chunk in trained for model in chunk]
    return EnsembleModel(config, tuple(models), raw.feature_names, raw.label_names)


def score_population(values, ens: EnsembleModel):
    """Votes (n, population) and mean tuples (n, population, c) for raw rows."""
    values = np.asarray(values, dtype=float)
    means_per_model = parallel_map(
        lambda model: mean_tuples_matrix(values, model), ens.models
    )
    means = np.stack(means_per_model, axis=1)
    votes = np.argmax(means, axis=2).astype(np.int64) + 1
    return votes, means


def predict_record(unit_values, ens: EnsembleModel) -> PredictionRecord:
    """Classify one raw measurement tuple under every model of the population."""
    row = np.asarray(unit_values, dtype=float)
    votes, means = score_population(row[None, :], ens)
    return PredictionRecord(votes[0], means[0])


def vote_counts(rec: PredictionRecord) -> np.ndarray:
    return np.bincount(rec.votes - 1, minlength=rec.n_classes)


def final_prediction(rec: PredictionRecord) -> int:
    """Modal class of the population votes (1-based); ties go to the lowest index."""
    return int(np.argmax(vote_counts(rec))) + 1


def thresholded_prediction(rec: PredictionRecord, theta: float = DEFAULT_THETA):
    """Modal class if its vote fraction strictly exceeds `theta`, else None.

    A fraction exactly equal to `theta` is rejected, so theta=0 accepts every
    unit and reproduces :func:`final_prediction`.
    """
    if not 0 <= theta <= 1:
        raise ValueError(f"decision threshold must lie in [0, 1], got {theta}")
    counts = vote_counts(rec)
    winner = int(np.argmax(counts))
    if counts[winner] / rec.population > theta:
        return winner + 1
    return None


def _chunk(items, size: int = 16) -> list:
    return [items[i : i + size] for i in range(0, len(items), size)]
