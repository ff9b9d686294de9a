"""Weight and bias initialization.

Two schemes: zero-mean Gaussian draws with variance 2/(fan_in + fan_out)
for deep nets, and bounded uniform draws for the classical baseline.
Biases start at zero under both schemes.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .linalg import Matrix, Vector
from .network import NetworkParams, validate_layer_chain


class InitKind(str, enum.Enum):
    XAVIER_GAUSSIAN = "xavier_gaussian"
    UNIFORM_RANDOM = "uniform_random"

    @classmethod
    def of(cls, value) -> "InitKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown init scheme {value!r}, expected one of {[k.value for k in cls]}"
            ) from None


@dataclass(frozen=True)
class InitScheme:
    kind: InitKind = InitKind.XAVIER_GAUSSIAN
    uniform_halfwidth: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "kind", InitKind.of(self.kind))
        if self.kind is InitKind.UNIFORM_RANDOM and not self.uniform_halfwidth > 0:
            raise ConfigError(f"uniform halfwidth must be > 0, got {self.uniform_halfwidth}")


def init_layer(scheme: InitScheme, fan_in: int, fan_out: int,
               rng: np.random.Generator) -> tuple[Matrix, Vector]:
    """Draw one layer's weights (fan_out x fan_in) and zero biases."""
    if fan_in < 1 or fan_out < 1:
        raise ConfigError(f"fans must be >= 1, got fan_in={fan_in}, fan_out={fan_out}")
    if scheme.kind is InitKind.XAVIER_GAUSSIAN:
        std = np.sqrt(2.0 / (fan_in + fan_out))
        weights = rng.normal(0.0, std, size=(fan_out, fan_in))
    else:
        hw = scheme.uniform_halfwidth
        weights = rng.uniform(-hw, hw, size=(fan_out, fan_in))
    return weights, np.zeros(fan_out, dtype=np.float64)


def init_network(scheme: InitScheme, specs, rng: np.random.Generator) -> NetworkParams:
    """Initialize every layer of a chained topology, in layer order."""
    specs = validate_layer_chain(specs)
    weights, biases = [], []
    for spec in specs:
        w, b = init_layer(scheme, spec.input_width, spec.output_width, rng)
        weights.append(w)
        biases.append(b)
    return NetworkParams(weights, biases)
