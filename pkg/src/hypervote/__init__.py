"""Hypergraph-ensemble classifier over discretized feature interactions.

Training discretizes standardized features under randomly sampled interval
partitions, builds one sparse hyperedge-to-class-distribution model per
partition, and classifies by population majority vote, with optional
decision-threshold and class rule-out modes.
"""

__version__ = "0.1.0"

from .data_io import RawDataset, iris_path, load_csv, load_ensemble, save_ensemble
from .ensemble import (
    EnsembleConfig,
    EnsembleModel,
    PredictionRecord,
    final_prediction,
    predict_record,
    sample_params,
    thresholded_prediction,
    train_population,
)
from .evaluate import EvalReport, cross_validate, stratified_kfold
from .kernels import BACKEND
from .model import HypergraphModel, HyperedgeKey, train_model
from .preprocess import FeatureStats, PartitionParams
from .ruleout import RuleOutResult, mean_distribution, rule_out, vote_frequencies
from .synth import gaussian_mixture, interaction_only

__all__ = [
    "BACKEND",
    "EnsembleConfig",
    "EnsembleModel",
    "EvalReport",
    "FeatureStats",
    "HyperedgeKey",
    "HypergraphModel",
    "PartitionParams",
    "PredictionRecord",
    "RawDataset",
    "RuleOutResult",
    "__version__",
    "cross_validate",
    "final_prediction",
    "gaussian_mixture",
    "interaction_only",
    "iris_path",
    "load_csv",
    "load_ensemble",
    "mean_distribution",
    "predict_record",
    "rule_out",
    "sample_params",
    "save_ensemble",
    "stratified_kfold",
    "thresholded_prediction",
    "train_model",
    "train_population",
    "vote_frequencies",
]
