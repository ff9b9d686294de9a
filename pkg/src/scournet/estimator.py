"""Estimator-style front end: ``fit(X, y)`` / ``predict(X)`` with the
``get_params``/``set_params`` conventions, so the regressor drops into
pipelines and model-selection tooling that speak that protocol.

All constructor arguments are stored verbatim and validated at ``fit``
time; fitted state lives in trailing-underscore attributes.
"""

import inspect

import numpy as np

from .errors import ConfigError
from .initializers import InitScheme
from .optim import AdamConfig, MomentumConfig
from .training import TrainConfig, _chain_specs, evaluate, fit_arrays, preset_config
from .validation import check_feature_matrix, check_target_vector


class ScourNetRegressor:
    """Feedforward neural-network regressor for scour depth.

    Parameters
    ----------
    hidden_widths : tuple of int
        Units per hidden layer; the output layer is a single identity unit.
    hidden_activation : {"relu", "sigmoid", "tanh", "identity"}
    dropout_rate : float in [0, 1)
        Inverted-dropout rate on every hidden layer (0 disables dropout).
    init_scheme : {"xavier_gaussian", "uniform_random"}
    uniform_halfwidth : float
        Half-width of the uniform draw when ``init_scheme="uniform_random"``.
    updater : {"adam", "momentum"}
    adam_alpha, adam_beta1, adam_beta2, adam_epsilon : float
        Adam hyperparameters (defaults are the standard recommendations).
    learning_rate, momentum : float
        Momentum-SGD hyperparameters, used when ``updater="momentum"``.
    batch_size : int or None
        Samples per update; None trains full batch.
    epochs : int
    shuffle_each_epoch : bool
    history_every : int
        Record training history every this many epochs.
    seed : int
        Drives initialization, shuffling and dropout; runs are reproducible.
    """

    def __init__(self, hidden_widths=(100, 80, 50), hidden_activation="relu",
                 dropout_rate=0.0, init_scheme="xavier_gaussian", uniform_halfwidth=0.5,
                 updater="adam", adam_alpha=0.001, adam_beta1=0.9, adam_beta2=0.999,
                 adam_epsilon=1e-8, learning_rate=0.2, momentum=0.1, batch_size=5,
                 epochs=15000, shuffle_each_epoch=True, history_every=100, seed=42):
        self.hidden_widths = hidden_widths
        self.hidden_activation = hidden_activation
        self.dropout_rate = dropout_rate
        self.init_scheme = init_scheme
        self.uniform_halfwidth = uniform_halfwidth
        self.updater = updater
        self.adam_alpha = adam_alpha
        self.adam_beta1 = adam_beta1
        self.adam_beta2 = adam_beta2
        self.adam_epsilon = adam_epsilon
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.batch_size = batch_size
        self.epochs = epochs
        self.shuffle_each_epoch = shuffle_each_epoch
        self.history_every = history_every
        self.seed = seed

    @classmethod
    def _param_names(cls):
        signature = inspect.signature(cls.__init__)
        return [name for name in signature.parameters if name != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "ScourNetRegressor":
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(f"invalid parameter {name!r} for {type(self).__name__}; "
                                 f"valid parameters are {sorted(valid)}")
            setattr(self, name, value)
        return self

    @classmethod
    def from_preset(cls, name: str, seed: int = 42) -> "ScourNetRegressor":
        """Instantiate one of the named reference configurations."""
        cfg = preset_config(name, seed=seed)
        hidden = tuple(s.output_width for s in cfg.layer_specs[:-1])
        est = cls(hidden_widths=hidden,
                  hidden_activation=cfg.layer_specs[0].activation.value,
                  dropout_rate=cfg.layer_specs[0].dropout_rate,
                  init_scheme=cfg.init.kind.value,
                  uniform_halfwidth=cfg.init.uniform_halfwidth,
                  batch_size=cfg.batch_size, epochs=cfg.epochs, seed=seed)
        if isinstance(cfg.updater, MomentumConfig):
            est.set_params(updater="momentum", learning_rate=cfg.updater.learning_rate,
                           momentum=cfg.updater.momentum)
        return est

    def build_config(self, n_features: int) -> TrainConfig:
        """Materialize a validated :class:`TrainConfig` for fixed input width."""
        if self.updater == "adam":
            updater = AdamConfig(self.adam_alpha, self.adam_beta1, self.adam_beta2,
                                 self.adam_epsilon)
        elif self.updater == "momentum":
            updater = MomentumConfig(self.learning_rate, self.momentum)
        else:
            raise ConfigError(f"updater must be 'adam' or 'momentum', got {self.updater!r}")
        specs = _chain_specs(n_features, tuple(self.hidden_widths),
                             self.hidden_activation, self.dropout_rate)
        return TrainConfig(layer_specs=specs,
                           init=InitScheme(self.init_scheme, self.uniform_halfwidth),
                           updater=updater, batch_size=self.batch_size, epochs=self.epochs,
                           seed=self.seed, shuffle_each_epoch=self.shuffle_each_epoch,
                           history_every=self.history_every)

    def fit(self, X, y, validation_data=None) -> "ScourNetRegressor":
        """Train on raw-unit features (n, d) and targets (n,) in meters."""
        X = check_feature_matrix(X)
        y = check_target_vector(y, n_rows=X.shape[0])
        cfg = self.build_config(X.shape[1])
        X_val = y_val = None
        if validation_data is not None:
            X_val, y_val = validation_data
        self.model_, self.history_ = fit_arrays(cfg, X, y, X_val, y_val)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X) -> np.ndarray:
        """Predicted scour depth in meters, shape (n,)."""
        self._require_fitted()
        return self.model_.predict(X)

    def score_report(self, X, y):
        """Correlation/RMSE/MAE report against observed targets in meters."""
        self._require_fitted()
        from .metrics import report

        y = check_target_vector(y)
        return report(y, self.predict(X))

    def _require_fitted(self):
        if not hasattr(self, "model_"):
            raise ValueError(f"{type(self).__name__} is not fitted; call fit(X, y) first")

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


__all__ = ["ScourNetRegressor", "evaluate"]
