"""Network topology, forward pass and backpropagation.

A network is a chain of fully connected layers.  Layer ``k`` computes

    net = inputs @ W.T + b          (W is output_width x input_width)
    out = activation(net)

with optional inverted dropout on hidden outputs in training mode:
kept units are scaled by 1/(1-p) so inference needs no rescaling.

``forward`` records everything ``backward`` needs (net inputs,
pre-dropout outputs, dropout masks), and ``backward`` walks the chain in
reverse returning one (dW, db) pair per layer.
"""

from dataclasses import dataclass, field

import numpy as np

from .activations import Activation, activate, activate_derivative
from .errors import ConfigError, ShapeError
from .linalg import Matrix, Vector


@dataclass(frozen=True)
class LayerSpec:
    """Widths, activation and dropout rate of one fully connected layer."""

    input_width: int
    output_width: int
    activation: Activation = Activation.IDENTITY
    dropout_rate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "activation", Activation.of(self.activation))
        if self.input_width < 1 or self.output_width < 1:
            raise ConfigError(
                f"layer widths must be >= 1, got {self.input_width}x{self.output_width}"
            )
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError(f"dropout rate must be in [0, 1), got {self.dropout_rate}")


def validate_layer_chain(specs) -> tuple:
    """Check consecutive widths chain and return the specs as a tuple."""
    specs = tuple(specs)
    if not specs:
        raise ConfigError("a network needs at least one layer")
    for k in range(len(specs) - 1):
        if specs[k].output_width != specs[k + 1].input_width:
            raise ConfigError(
                f"layer {k} outputs {specs[k].output_width} units but "
                f"layer {k + 1} expects {specs[k + 1].input_width}"
            )
    return specs


@dataclass
class NetworkParams:
    """Weight matrices (output_width x input_width) and bias vectors per layer."""

    weights: list  # list[Matrix]
    biases: list  # list[Vector]

    def __post_init__(self):
        if len(self.weights) != len(self.biases):
            raise ShapeError(
                f"{len(self.weights)} weight matrices vs {len(self.biases)} bias vectors"
            )
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
                raise ShapeError(
                    f"layer {k}: weights {w.shape} do not pair with biases {b.shape}"
                )

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    def copy(self) -> "NetworkParams":
        return NetworkParams([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def check_matches(self, specs) -> None:
        if len(self.weights) != len(specs):
            raise ShapeError(f"{len(self.weights)} parameter layers vs {len(specs)} layer specs")
        for k, (w, spec) in enumerate(zip(self.weights, specs)):
            want = (spec.output_width, spec.input_width)
            if w.shape != want:
                raise ShapeError(f"layer {k}: weights {w.shape}, spec wants {want}")


@dataclass
class ForwardTrace:
    """Per-layer intermediates of one forward pass.

    ``outputs`` holds pre-dropout activations; the value actually fed to
    the next layer is ``outputs[k] * dropout_masks[k]`` when a mask is
    present.  Masks hold 0 or 1/(1-p) and exist only in training mode.
    """

    specs: tuple
    batch: Matrix
    net_inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    dropout_masks: list = field(default_factory=list)

    def layer_input(self, k: int) -> Matrix:
        if k == 0:
            return self.batch
        prev = self.outputs[k - 1]
        mask = self.dropout_masks[k - 1]
        return prev if mask is None else prev * mask

    @property
    def prediction(self) -> Matrix:
        # the final layer never carries a dropout mask
        return self.outputs[-1]


@dataclass
class Gradients:
    """dL/dW and dL/db per layer, shapes matching :class:`NetworkParams`."""

    weights: list
    biases: list


def net_input(weights: Matrix, bias: Vector, inputs: Matrix) -> Matrix:
    """Weighted input sums plus bias: row b, unit j = sum_i W[j,i]*inputs[b,i] + bias[j]."""
    if weights.shape[1] != inputs.shape[1]:
        raise ShapeError(
            f"weights {weights.shape} expect {weights.shape[1]} inputs, batch has {inputs.shape[1]}"
        )
    if bias.shape[0] != weights.shape[0]:
        raise ShapeError(f"bias {bias.shape} does not match weights {weights.shape}")
    return inputs @ weights.T + bias


def forward(params: NetworkParams, specs, batch: Matrix, mode: str = "infer",
            rng: np.random.Generator | None = None) -> ForwardTrace:
    """Run the batch through every layer, recording a trace.

    ``mode`` is "train" or "infer".  Training mode draws inverted-dropout
    masks for hidden layers with dropout_rate > 0 and needs ``rng``; with
    all rates zero the two modes produce bit-identical traces.
    """
    specs = validate_layer_chain(specs)
    params.check_matches(specs)
    if mode not in ("train", "infer"):
        raise ValueError(f"mode must be 'train' or 'infer', got {mode!r}")
    if batch.ndim != 2 or batch.shape[1] != specs[0].input_width:
        raise ShapeError(
            f"batch shape {batch.shape} does not match first layer input width "
            f"{specs[0].input_width}"
        )

    trace = ForwardTrace(specs=specs, batch=batch)
    x = batch
    last = len(specs) - 1
    for k, spec in enumerate(specs):
        net = net_input(params.weights[k], params.biases[k], x)
        out = activate(spec.activation, net)
        mask = None
        # dropout applies to hidden outputs only; the final layer is the prediction
        if mode == "train" and spec.dropout_rate > 0.0 and k != last:
            if rng is None:
                raise ValueError("training-mode forward with dropout needs an rng")
            keep = 1.0 - spec.dropout_rate
            mask = (rng.random(out.shape) < keep) / keep
        trace.net_inputs.append(net)
        trace.outputs.append(out)
        trace.dropout_masks.append(mask)
        x = out if mask is None else out * mask
    return trace


def backward(params: NetworkParams, trace: ForwardTrace, d_loss_d_output: Matrix) -> Gradients:
    """Backpropagate a loss gradient through the traced network.

    ``d_loss_d_output`` is dL/d(prediction), same shape as the final
    output.  Returns gradients whose shapes mirror the parameters.
    """
    n = params.n_layers
    if len(trace.outputs) != n or len(trace.specs) != n:
        raise ShapeError(f"trace has {len(trace.outputs)} layers, params have {n}")
    params.check_matches(trace.specs)
    if d_loss_d_output.shape != trace.outputs[-1].shape:
        raise ShapeError(
            f"loss gradient {d_loss_d_output.shape} vs output {trace.outputs[-1].shape}"
        )

    d_weights = [None] * n
    d_biases = [None] * n
    d_post = d_loss_d_output
    for k in range(n - 1, -1, -1):
        mask = trace.dropout_masks[k]
        d_act = d_post if mask is None else d_post * mask
        net = trace.net_inputs[k]
        kind = trace.specs[k].activation
        if kind is Activation.IDENTITY:
            d_net = d_act
        elif kind is Activation.RELU:
            d_net = np.where(net > 0.0, d_act, 0.0)
        else:
            d_net = d_act * activate_derivative(kind, net)
        x = trace.layer_input(k)
        d_weights[k] = d_net.T @ x
        d_biases[k] = d_net.sum(axis=0)
        if k > 0:
            d_post = d_net @ params.weights[k]
    return Gradients(d_weights, d_biases)
