"""Activation functions and their derivatives.

All four kinds are total on finite inputs.  The rectifier derivative at
exactly zero is defined as 0, which keeps gradient checks deterministic.
"""

import enum

import numpy as np


class Activation(str, enum.Enum):
    RELU = "relu"
    SIGMOID = "sigmoid"
    TANH = "tanh"
    IDENTITY = "identity"

    @classmethod
    def of(cls, value) -> "Activation":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown activation {value!r}, expected one of {[a.value for a in cls]}"
            ) from None


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # clamp keeps exp() finite; saturation is exact well before +/-500
    return 1.0 / (1.0 + np.exp(-np.clip(x, -500.0, 500.0)))


def activate(kind: Activation, x: np.ndarray) -> np.ndarray:
    """Apply the activation elementwise."""
    kind = Activation.of(kind)
    if kind is Activation.RELU:
        return np.maximum(x, 0.0)
    if kind is Activation.SIGMOID:
        return _sigmoid(x)
    if kind is Activation.TANH:
        return np.tanh(x)
    return np.asarray(x, dtype=np.float64)


def activate_derivative(kind: Activation, net: np.ndarray) -> np.ndarray:
    """Derivative of the activation evaluated at the net input."""
    kind = Activation.of(kind)
    if kind is Activation.RELU:
        return (net > 0.0).astype(np.float64)
    if kind is Activation.SIGMOID:
        s = _sigmoid(net)
        return s * (1.0 - s)
    if kind is Activation.TANH:
        t = np.tanh(net)
        return 1.0 - t * t
    return np.ones_like(net, dtype=np.float64)
