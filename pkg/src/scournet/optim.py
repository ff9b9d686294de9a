"""Parameter updaters: classical momentum SGD and Adam.

Both updaters act on a flat parameter vector paired with a flat gradient
vector of the same shape (any ndarray shape works; training flattens the
whole network into one vector for speed).  Updates happen in place and
are RNG-free, so identical inputs give bit-identical outputs.

Momentum:   v <- mu*v + lr*g;              theta <- theta - v
Adam:       t <- t+1
            m <- b1*m + (1-b1)*g
            v <- b2*v + (1-b2)*g^2
            mhat = m/(1-b1^t); vhat = v/(1-b2^t)
            theta <- theta - alpha*mhat/(sqrt(vhat) + eps)
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericError, ShapeError


@dataclass(frozen=True)
class MomentumConfig:
    learning_rate: float = 0.2
    momentum: float = 0.1

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ConfigError(f"learning rate must be > 0, got {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigError(f"momentum must be in [0, 1), got {self.momentum}")


@dataclass(frozen=True)
class AdamConfig:
    alpha: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be > 0, got {self.alpha}")
        if not 0.0 <= self.beta1 < 1.0 or not 0.0 <= self.beta2 < 1.0:
            raise ConfigError(f"betas must be in [0, 1), got {self.beta1}, {self.beta2}")
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be > 0, got {self.epsilon}")


# (name, start, stop) spans into the flat vector, used to blame a layer in errors
Layout = tuple[tuple[str, int, int], ...]


@dataclass
class MomentumState:
    velocity: np.ndarray
    layout: Layout | None = None


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0
    layout: Layout | None = None
    # scratch buffers, allocated lazily; never part of the observable state
    _buf: np.ndarray | None = field(default=None, repr=False)
    _buf2: np.ndarray | None = field(default=None, repr=False)


def momentum_state_for(params: np.ndarray, layout: Layout | None = None) -> MomentumState:
    return MomentumState(np.zeros_like(params), layout)


def adam_state_for(params: np.ndarray, layout: Layout | None = None) -> AdamState:
    return AdamState(np.zeros_like(params), np.zeros_like(params), 0, layout)


def _check_finite(grads: np.ndarray, layout: Layout | None) -> None:
    if np.isfinite(grads).all():
        return
    where = "gradient"
    if layout:
        flat = grads.ravel()
        for name, start, stop in layout:
            if not np.isfinite(flat[start:stop]).all():
                where = f"gradient of {name}"
                break
    raise NumericError(f"non-finite {where}")


def _check_shapes(params: np.ndarray, grads: np.ndarray, *state_arrays) -> None:
    if grads.shape != params.shape:
        raise ShapeError(f"gradients {grads.shape} vs parameters {params.shape}")
    for arr in state_arrays:
        if arr.shape != params.shape:
            raise ShapeError(f"optimizer state {arr.shape} vs parameters {params.shape}")


def momentum_step(params: np.ndarray, grads: np.ndarray, state: MomentumState,
                  cfg: MomentumConfig) -> tuple[np.ndarray, MomentumState]:
    """One momentum update, in place on ``params`` and ``state``."""
    _check_shapes(params, grads, state.velocity)
    _check_finite(grads, state.layout)
    v = state.velocity
    v *= cfg.momentum
    v += cfg.learning_rate * grads
    params -= v
    return params, state


def adam_step(params: np.ndarray, grads: np.ndarray, state: AdamState,
              cfg: AdamConfig) -> tuple[np.ndarray, AdamState]:
    """One Adam update, in place on ``params`` and ``state``."""
    _check_shapes(params, grads, state.m, state.v)
    _check_finite(grads, state.layout)
    if state._buf is None or state._buf.shape != params.shape:
        state._buf = np.empty_like(params)
        state._buf2 = np.empty_like(params)
    buf, buf2 = state._buf, state._buf2

    state.t += 1
    m, v = state.m, state.v
    m *= cfg.beta1
    np.multiply(grads, 1.0 - cfg.beta1, out=buf)
    m += buf
    v *= cfg.beta2
    np.multiply(grads, grads, out=buf2)
    buf2 *= 1.0 - cfg.beta2
    v += buf2

    # bias-corrected step: alpha * mhat / (sqrt(vhat) + eps)
    c1 = 1.0 - cfg.beta1 ** state.t
    c2 = 1.0 - cfg.beta2 ** state.t
    np.divide(v, c2, out=buf2)
    np.sqrt(buf2, out=buf2)
    buf2 += cfg.epsilon
    np.divide(m, c1, out=buf)
    buf /= buf2
    buf *= cfg.alpha
    params -= buf
    return params, state
