"""scournet: a from-scratch feedforward neural-network regression library
and CLI for bridge pier scour depth prediction.

The deep configuration (three ReLU hidden layers trained with Adam) is
compared against a classical single-hidden-layer baseline (sigmoid,
momentum SGD), evaluated by correlation coefficient, RMSE and MAE on a
seven-feature hydraulic dataset.
"""

from .activations import Activation, activate, activate_derivative
from .data import (COLUMNS, FEATURE_NAMES, ColumnStats, Dataset, FeatureStats,
                   ScourRecord, fit_standardizer, load_csv, split, summarize,
                   synth_generate, write_csv)
from .errors import (ConfigError, DivergenceError, DomainError, NumericError,
                     ParseError, SchemaError, ScourNetError, ShapeError,
                     UndefinedCorrelationError, ValidationError)
from .estimator import ScourNetRegressor
from .initializers import InitKind, InitScheme, init_layer, init_network
from .metrics import MetricsReport, correlation, mae, report, rmse
from .model_io import load_model, load_network, save_model, save_network
from .network import (ForwardTrace, Gradients, LayerSpec, NetworkParams, backward,
                      forward, net_input)
from .optim import (AdamConfig, AdamState, MomentumConfig, MomentumState,
                    adam_state_for, adam_step, momentum_state_for, momentum_step)
from .preprocessing import Standardizer
from .training import (GradCheckReport, HistoryEntry, PredictionPair, PRESET_NAMES,
                       ScourModel, TrainConfig, TrainHistory, evaluate,
                       gradient_check, preset_config, train)

__version__ = "0.1.0"

__all__ = [
    "Activation", "activate", "activate_derivative",
    "COLUMNS", "FEATURE_NAMES", "ColumnStats", "Dataset", "FeatureStats",
    "ScourRecord", "fit_standardizer", "load_csv", "split", "summarize",
    "synth_generate", "write_csv",
    "ConfigError", "DivergenceError", "DomainError", "NumericError", "ParseError",
    "SchemaError", "ScourNetError", "ShapeError", "UndefinedCorrelationError",
    "ValidationError",
    "ScourNetRegressor",
    "InitKind", "InitScheme", "init_layer", "init_network",
    "MetricsReport", "correlation", "mae", "report", "rmse",
    "load_model", "load_network", "save_model", "save_network",
    "ForwardTrace", "Gradients", "LayerSpec", "NetworkParams", "backward",
    "forward", "net_input",
    "AdamConfig", "AdamState", "MomentumConfig", "MomentumState",
    "adam_state_for", "adam_step", "momentum_state_for", "momentum_step",
    "Standardizer",
    "GradCheckReport", "HistoryEntry", "PredictionPair", "PRESET_NAMES",
    "ScourModel", "TrainConfig", "TrainHistory", "evaluate", "gradient_check",
    "preset_config", "train",
    "__version__",
]
