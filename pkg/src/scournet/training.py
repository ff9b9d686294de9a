"""End-to-end training: configuration presets, the mini-batch loop,
evaluation in meters, and a finite-difference gradient check.

Training happens in standardized space (features and target are
z-scored on the training split only) with MSE loss; predictions are
inverted back to meters before any metric is computed.  A run is fully
deterministic given its seed: one PCG64 generator drives initialization,
per-epoch shuffling and dropout in sequence.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, FEATURE_NAMES
from .errors import ConfigError, DivergenceError, DomainError
from .initializers import InitKind, InitScheme, init_network
from .metrics import MetricsReport, mae as _mae, report as metrics_report, rmse as _rmse
from .network import (Gradients, LayerSpec, NetworkParams, backward, forward,
                      validate_layer_chain)
from .optim import (AdamConfig, AdamState, MomentumConfig, MomentumState,
                    adam_state_for, adam_step, momentum_state_for, momentum_step)
from .preprocessing import Standardizer
from .validation import check_feature_matrix, check_target_vector

FEATURE_COUNT = len(FEATURE_NAMES)
PRESET_NAMES = ("dnn_paper", "bpnn_paper")


@dataclass(frozen=True)
class TrainConfig:
    """Everything that determines a training run.

    ``batch_size=None`` means full-batch updates.  ``updater`` is either
    an :class:`AdamConfig` or a :class:`MomentumConfig`.
    """

    layer_specs: tuple
    init: InitScheme = InitScheme()
    updater: object = AdamConfig()
    batch_size: int | None = 5
    epochs: int = 15000
    loss: str = "mse"
    seed: int = 42
    shuffle_each_epoch: bool = True
    history_every: int = 100

    def __post_init__(self):
        specs = validate_layer_chain(self.layer_specs)
        object.__setattr__(self, "layer_specs", specs)
        if specs[-1].output_width != 1:
            raise ConfigError(f"last layer must output 1 unit, got {specs[-1].output_width}")
        if self.batch_size is not None and self.batch_size < 1:
            raise ConfigError(f"batch size must be >= 1 (or None for full batch), "
                              f"got {self.batch_size}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.loss != "mse":
            raise ConfigError(f"unsupported loss {self.loss!r}, only 'mse' is implemented")
        if not isinstance(self.updater, (AdamConfig, MomentumConfig)):
            raise ConfigError(f"updater must be AdamConfig or MomentumConfig, "
                              f"got {type(self.updater).__name__}")
        if self.history_every < 1:
            raise ConfigError(f"history_every must be >= 1, got {self.history_every}")


def preset_config(name: str, seed: int = 42, dropout_rate: float = 0.0) -> TrainConfig:
    """The two named reference configurations, as trained and compared."""
    if name == "dnn_paper":
        widths = (100, 80, 50)
        specs = _chain_specs(FEATURE_COUNT, widths, "relu", dropout_rate)
        return TrainConfig(layer_specs=specs, init=InitScheme(InitKind.XAVIER_GAUSSIAN),
                           updater=AdamConfig(), batch_size=5, epochs=15000, seed=seed)
    if name == "bpnn_paper":
        specs = _chain_specs(FEATURE_COUNT, (8,), "sigmoid", 0.0)
        return TrainConfig(layer_specs=specs,
                           init=InitScheme(InitKind.UNIFORM_RANDOM, uniform_halfwidth=0.5),
                           updater=MomentumConfig(learning_rate=0.2, momentum=0.1),
                           batch_size=None, epochs=1500, seed=seed)
    raise ConfigError(f"unknown preset {name!r}, expected one of {PRESET_NAMES}")


def _chain_specs(input_width, hidden_widths, hidden_activation, dropout_rate) -> tuple:
    specs = []
    fan_in = input_width
    for width in hidden_widths:
        specs.append(LayerSpec(fan_in, int(width), hidden_activation, dropout_rate))
        fan_in = int(width)
    specs.append(LayerSpec(fan_in, 1, "identity", 0.0))
    return tuple(specs)


@dataclass(frozen=True)
class HistoryEntry:
    epoch: int                    # 1-based
    train_loss: float             # mean batch MSE, standardized units
    val_rmse_m: float | None      # meters, when a validation set was given


@dataclass
class TrainHistory:
    entries: list = field(default_factory=list)
    total_steps: int = 0


@dataclass
class ScourModel:
    """A trained network plus the standardizer that feeds it."""

    specs: tuple
    params: NetworkParams
    standardizer: Standardizer

    def predict(self, X) -> np.ndarray:
        """Predicted scour depth in meters for raw-unit features, shape (n,)."""
        X = check_feature_matrix(X, expected_width=self.specs[0].input_width)
        trace = forward(self.params, self.specs, self.standardizer.transform(X), mode="infer")
        return self.standardizer.inverse_transform_target(trace.prediction.ravel())


def _flatten_params(params: NetworkParams):
    """Copy parameters into one flat vector; return it with aliased views.

    The returned :class:`NetworkParams` shares memory with the flat
    vector, so in-place optimizer updates are visible to forward passes.
    """
    sizes = []
    layout = []
    offset = 0
    for k, (w, b) in enumerate(zip(params.weights, params.biases)):
        layout.append((f"layer {k} weights", offset, offset + w.size))
        offset += w.size
        layout.append((f"layer {k} bias", offset, offset + b.size))
        offset += b.size
        sizes.append((w.shape, b.shape))
    flat = np.empty(offset, dtype=np.float64)
    weights, biases = [], []
    pos = 0
    for (wshape, bshape), (w, b) in zip(sizes, zip(params.weights, params.biases)):
        wv = flat[pos:pos + w.size].reshape(wshape)
        wv[...] = w
        pos += w.size
        bv = flat[pos:pos + b.size]
        bv[...] = b
        pos += b.size
        weights.append(wv)
        biases.append(bv)
    return flat, tuple(layout), NetworkParams(weights, biases)


def _flat_gradients(grads: Gradients, out: np.ndarray) -> np.ndarray:
    parts = []
    for w, b in zip(grads.weights, grads.biases):
        parts.append(w.ravel())
        parts.append(b)
    return np.concatenate(parts, out=out)


def train(cfg: TrainConfig, train_set: Dataset, validation_set: Dataset | None = None
          ) -> tuple[ScourModel, TrainHistory]:
    """Fit the configured network on a dataset; returns (model, history)."""
    if cfg.layer_specs[0].input_width != FEATURE_COUNT:
        raise ConfigError(f"first layer must take {FEATURE_COUNT} inputs, "
                          f"got {cfg.layer_specs[0].input_width}")
    X, y = train_set.features(), train_set.targets()
    X_val = y_val = None
    if validation_set is not None:
        X_val, y_val = validation_set.features(), validation_set.targets()
    return fit_arrays(cfg, X, y, X_val, y_val)


def fit_arrays(cfg: TrainConfig, X, y, X_val=None, y_val=None) -> tuple[ScourModel, TrainHistory]:
    """Core loop on raw-unit arrays; standardizes, initializes, iterates."""
    X = check_feature_matrix(X, expected_width=cfg.layer_specs[0].input_width)
    y = check_target_vector(y, n_rows=X.shape[0])
    if X_val is not None:
        X_val = check_feature_matrix(X_val, expected_width=X.shape[1], name="X_val")
        y_val = check_target_vector(y_val, n_rows=X_val.shape[0], name="y_val")

    standardizer = Standardizer().fit(X, y)
    Xs = standardizer.transform(X)
    ys = standardizer.transform_target(y).reshape(-1, 1)

    n = Xs.shape[0]
    batch = n if cfg.batch_size is None else min(cfg.batch_size, n)
    n_batches = math.ceil(n / batch)
    specs = cfg.layer_specs

    rng = np.random.default_rng(cfg.seed)
    flat, layout, params = _flatten_params(init_network(cfg.init, specs, rng))
    grad_flat = np.empty_like(flat)

    if isinstance(cfg.updater, AdamConfig):
        state: object = adam_state_for(flat, layout)
        step = adam_step
    else:
        state = momentum_state_for(flat, layout)
        step = momentum_step

    history = TrainHistory()
    for epoch in range(1, cfg.epochs + 1):
        if cfg.shuffle_each_epoch:
            perm = rng.permutation(n)
            Xe, ye = Xs[perm], ys[perm]
        else:
            Xe, ye = Xs, ys
        epoch_loss = 0.0
        for b in range(n_batches):
            xb = Xe[b * batch:(b + 1) * batch]
            yb = ye[b * batch:(b + 1) * batch]
            trace = forward(params, specs, xb, mode="train", rng=rng)
            residual = trace.prediction - yb
            loss = float((residual * residual).mean())
            if not math.isfinite(loss):
                raise DivergenceError(f"non-finite training loss at epoch {epoch}, "
                                      f"batch {b + 1}")
            epoch_loss += loss
            d_out = residual * (2.0 / xb.shape[0])
            grads = backward(params, trace, d_out)
            step(flat, _flat_gradients(grads, grad_flat), state, cfg.updater)
            history.total_steps += 1
        if epoch % cfg.history_every == 0 or epoch == cfg.epochs:
            val = None
            if X_val is not None:
                pred_std = forward(params, specs, standardizer.transform(X_val),
                                   mode="infer").prediction.ravel()
                val = _rmse(y_val, standardizer.inverse_transform_target(pred_std))
            history.entries.append(HistoryEntry(epoch, epoch_loss / n_batches, val))

    return ScourModel(specs, params, standardizer), history


@dataclass(frozen=True)
class PredictionPair:
    actual_m: float
    predicted_m: float


def evaluate(model: ScourModel, test_set: Dataset) -> tuple[MetricsReport, list]:
    """Metrics in meters plus (actual, predicted) pairs in test order."""
    if len(test_set) == 0:
        raise DomainError("cannot evaluate on an empty test set")
    actual = test_set.targets()
    predicted = model.predict(test_set.features())
    pairs = [PredictionPair(float(a), float(p)) for a, p in zip(actual, predicted)]
    if len(pairs) >= 2:
        rep = metrics_report(actual, predicted)
    else:
        # correlation is undefined for a single pair; report the error measures
        rep = MetricsReport(cc=None, rmse=_rmse(actual, predicted),
                            mae=_mae(actual, predicted), n=1)
    return rep, pairs


# ---------------------------------------------------------------------------
# gradient verification


@dataclass(frozen=True)
class TensorCheck:
    layer: int
    tensor: str                  # "weights" or "bias"
    max_rel_error: float


@dataclass(frozen=True)
class GradCheckReport:
    activation: str
    widths: tuple
    max_rel_error: float         # over entries with |analytic| >= 1e-6
    max_abs_error_small: float   # over entries with |analytic| < 1e-6
    tensors: tuple
    passed: bool
    seed_used: int


def gradient_check(hidden_activation: str = "sigmoid", widths: tuple = (7, 5, 3, 1),
                   batch_size: int = 4, seed: int = 0, step: float = 1e-6,
                   corrupt: bool = False) -> GradCheckReport:
    """Compare backpropagated gradients against central finite differences.

    Uses a small network with the given layer widths (hidden activation as
    requested, identity output) and MSE loss on a random batch.  For relu
    the parameter point is re-drawn until no pre-activation lies within
    1e-4 of zero, so the difference quotient never straddles the kink.

    ``corrupt`` deliberately perturbs one analytic gradient entry; it
    exists so the check itself can be shown to catch a wrong backward pass.
    """
    specs = []
    for fan_in, fan_out in zip(widths[:-1], widths[1:-1]):
        specs.append(LayerSpec(fan_in, fan_out, hidden_activation))
    specs.append(LayerSpec(widths[-2], widths[-1], "identity"))
    specs = validate_layer_chain(specs)

    needs_kink_margin = any(s.activation.value == "relu" for s in specs)
    attempt_seed = seed
    for attempt in range(64):
        attempt_seed = seed + attempt
        rng = np.random.default_rng(attempt_seed)
        params = init_network(InitScheme(InitKind.XAVIER_GAUSSIAN), specs, rng)
        X = rng.normal(size=(batch_size, widths[0]))
        y = rng.normal(size=(batch_size, 1))
        if not needs_kink_margin or _kink_margin(params, specs, X) > 1e-4:
            break
    else:
        raise RuntimeError("could not find a kink-free parameter point")

    flat, layout, params = _flatten_params(params)

    def loss_at() -> float:
        pred = forward(params, specs, X, mode="infer").prediction
        r = pred - y
        return float((r * r).mean())

    trace = forward(params, specs, X, mode="infer")
    d_out = (trace.prediction - y) * (2.0 / batch_size)
    grads = backward(params, trace, d_out)
    analytic = np.concatenate([np.concatenate([w.ravel(), b])
                               for w, b in zip(grads.weights, grads.biases)])
    if corrupt:
        analytic = analytic.copy()
        analytic[0] += 1e-3 * (1.0 + abs(analytic[0]))

    numeric = np.empty_like(flat)
    for i in range(flat.size):
        saved = flat[i]
        flat[i] = saved + step
        hi = loss_at()
        flat[i] = saved - step
        lo = loss_at()
        flat[i] = saved
        numeric[i] = (hi - lo) / (2.0 * step)

    small = np.abs(analytic) < 1e-6
    denom = np.maximum(np.abs(analytic), np.abs(numeric))
    abs_err = np.abs(analytic - numeric)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(denom > 0.0, abs_err / np.maximum(denom, 1e-300), 0.0)

    max_rel = float(rel[~small].max()) if (~small).any() else 0.0
    max_abs_small = float(abs_err[small].max()) if small.any() else 0.0

    tensors = []
    for name, start, stop in layout:
        seg = slice(start, stop)
        seg_large = ~small[seg]
        seg_max = float(rel[seg][seg_large].max()) if seg_large.any() else 0.0
        layer_idx = int(name.split()[1])
        kind = "weights" if name.endswith("weights") else "bias"
        tensors.append(TensorCheck(layer_idx, kind, seg_max))

    passed = max_rel < 1e-5 and max_abs_small < 1e-8
    return GradCheckReport(str(hidden_activation), tuple(widths), max_rel,
                           max_abs_small, tuple(tensors), passed, attempt_seed)


def _kink_margin(params: NetworkParams, specs, X) -> float:
    trace = forward(params, specs, X, mode="infer")
    margin = math.inf
    for spec, net in zip(specs, trace.net_inputs):
        if spec.activation.value == "relu":
            margin = min(margin, float(np.abs(net).min()))
    return margin


def timed(fn, *args, **kwargs):
    """Run ``fn`` and return (result, elapsed_seconds)."""
    start = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - start
