"""Sufficient dimension reduction with shallow networks and golden search."""

from .dimsearch import (
    PenaltyConfig,
    SdrOutcome,
    SearchTrace,
    call_budget,
    criterion,
    golden_points,
    penalty,
    run_sdr,
    search_dimension,
)
from .estimator import GoldenRatioSDR
from .metrics import SubspacePair, aggregate, mse, vector_correlation
from .network import (
    DataSplit,
    FittedModel,
    NetworkParams,
    NnlResult,
    TrainConfig,
    TrainingDivergedError,
    forward,
    loss_and_gradient,
    nnl,
    split_train_val,
    train_once,
)
from .simgen import GeneratedData, ModelSpec, generate, random_orthogonal

__version__ = "0.1.0"

__all__ = [
    "PenaltyConfig", "SdrOutcome", "SearchTrace", "call_budget", "criterion",
    "golden_points", "penalty", "run_sdr", "search_dimension",
    "GoldenRatioSDR",
    "SubspacePair", "aggregate", "mse", "vector_correlation",
    "DataSplit", "FittedModel", "NetworkParams", "NnlResult", "TrainConfig",
    "TrainingDivergedError", "forward", "loss_and_gradient", "nnl",
    "split_train_val", "train_once",
    "GeneratedData", "ModelSpec", "generate", "random_orthogonal",
]
