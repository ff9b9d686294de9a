import math

import numpy as np
import pytest

from scournet.errors import ConfigError, NumericError, ShapeError
from scournet.optim import (AdamConfig, MomentumConfig, adam_state_for, adam_step,
                            momentum_state_for, momentum_step)


def scalar_adam_oracle(gradients, cfg=AdamConfig()):
    """Independent scalar trace of the Adam update, plain Python floats."""
    theta, m, v, t = 0.0, 0.0, 0.0, 0
    trajectory = []
    for g in gradients:
        t += 1
        m = cfg.beta1 * m + (1 - cfg.beta1) * g
        v = cfg.beta2 * v + (1 - cfg.beta2) * g * g
        m_hat = m / (1 - cfg.beta1 ** t)
        v_hat = v / (1 - cfg.beta2 ** t)
        theta = theta - cfg.alpha * m_hat / (math.sqrt(v_hat) + cfg.epsilon)
        trajectory.append(theta)
    return trajectory


def scalar_momentum_oracle(gradients, cfg=MomentumConfig()):
    theta, v = 0.0, 0.0
    trajectory = []
    for g in gradients:
        v = cfg.momentum * v + cfg.learning_rate * g
        theta = theta - v
        trajectory.append(theta)
    return trajectory


def test_adam_first_step_frozen_value():
    # hand trace with defaults, g=2 from zero state:
    # m=0.2, v=0.004, mhat=2, vhat=4, theta = -0.001*2/(2+1e-8)
    theta = np.zeros(1)
    state = adam_state_for(theta)
    adam_step(theta, np.array([2.0]), state, AdamConfig())
    assert state.t == 1
    assert np.isclose(state.m[0], 0.2, rtol=0, atol=1e-15)
    assert np.isclose(state.v[0], 0.004, rtol=0, atol=1e-15)
    assert abs(theta[0] - (-9.99999995e-4)) < 1e-12


def test_adam_matches_scalar_oracle_over_prescribed_gradients():
    gradients = [2.0, -1.0, 0.5, 3.0, -2.0, 1.5, 0.0, -0.5, 2.5, -1.5, 0.25]
    expected = scalar_adam_oracle(gradients)
    theta = np.zeros(1)
    state = adam_state_for(theta)
    cfg = AdamConfig()
    for g, want in zip(gradients, expected):
        adam_step(theta, np.array([g]), state, cfg)
        assert abs(theta[0] - want) <= 1e-12


def test_momentum_two_step_hand_trace():
    # lr=0.2, mu=0.1: step1 v=0.2 theta=-0.2; step2 v=0.22 theta=-0.42
    cfg = MomentumConfig(learning_rate=0.2, momentum=0.1)
    theta = np.zeros(1)
    state = momentum_state_for(theta)
    momentum_step(theta, np.array([1.0]), state, cfg)
    assert abs(theta[0] - (-0.2)) <= 1e-12
    assert abs(state.velocity[0] - 0.2) <= 1e-12
    momentum_step(theta, np.array([1.0]), state, cfg)
    assert abs(state.velocity[0] - 0.22) <= 1e-12
    assert abs(theta[0] - (-0.42)) <= 1e-12


def test_momentum_matches_scalar_oracle():
    gradients = [1.0, 1.0, -0.5, 2.0, 0.0, -1.0, 0.75]
    cfg = MomentumConfig(learning_rate=0.2, momentum=0.1)
    expected = scalar_momentum_oracle(gradients, cfg)
    theta = np.zeros(1)
    state = momentum_state_for(theta)
    for g, want in zip(gradients, expected):
        momentum_step(theta, np.array([g]), state, cfg)
        assert abs(theta[0] - want) <= 1e-12


def test_zero_gradient_fixed_points():
    theta = np.array([1.5, -2.0])
    state = momentum_state_for(theta)
    momentum_step(theta, np.zeros(2), state, MomentumConfig())
    np.testing.assert_array_equal(theta, [1.5, -2.0])

    theta = np.array([0.25])
    state = adam_state_for(theta)
    adam_step(theta, np.zeros(1), state, AdamConfig())
    np.testing.assert_array_equal(theta, [0.25])
    assert state.t == 1  # the step counter still advances


def test_adam_constant_gradient_step_size_approaches_alpha():
    # scalar simulation oracle: after many steps |delta| -> alpha * sign(g)
    cfg = AdamConfig()
    theta = np.zeros(1)
    state = adam_state_for(theta)
    g = np.array([0.37])
    prev = theta[0]
    for _ in range(1000):
        prev = theta[0]
        adam_step(theta, g, state, cfg)
    final_delta = abs(theta[0] - prev)
    assert abs(final_delta - cfg.alpha) / cfg.alpha < 0.01


@pytest.mark.parametrize("g", [0.01, 1.0, 123.0])
def test_adam_first_step_scale_robustness(g):
    def first_step_delta(grad):
        theta = np.zeros(1)
        adam_step(theta, np.array([grad]), adam_state_for(theta), AdamConfig())
        return abs(theta[0])

    small, large = first_step_delta(g), first_step_delta(1000.0 * g)
    assert abs(small - large) / large < 1e-6


def test_momentum_zero_mu_is_plain_sgd():
    cfg = MomentumConfig(learning_rate=0.05, momentum=0.0)
    rng = np.random.default_rng(17)
    theta = rng.normal(size=12)
    grads = rng.normal(size=12)
    expected = theta - cfg.learning_rate * grads
    state = momentum_state_for(theta)
    momentum_step(theta, grads, state, cfg)
    np.testing.assert_array_equal(theta, expected)


def test_updaters_are_deterministic():
    def run_adam():
        theta = np.linspace(-1, 1, 9)
        state = adam_state_for(theta)
        rng = np.random.default_rng(31)
        for _ in range(50):
            adam_step(theta, rng.normal(size=9), state, AdamConfig())
        return theta

    np.testing.assert_array_equal(run_adam(), run_adam())


def test_state_shape_congruence_and_counter():
    theta = np.zeros(7)
    state = adam_state_for(theta)
    for k in range(5):
        adam_step(theta, np.ones(7), state, AdamConfig())
        assert state.m.shape == theta.shape
        assert state.v.shape == theta.shape
        assert state.t == k + 1


def test_shape_mismatch_rejected():
    theta = np.zeros(3)
    with pytest.raises(ShapeError):
        momentum_step(theta, np.zeros(4), momentum_state_for(theta), MomentumConfig())
    with pytest.raises(ShapeError):
        adam_step(theta, np.zeros(2), adam_state_for(theta), AdamConfig())
    bad_state = momentum_state_for(np.zeros(5))
    with pytest.raises(ShapeError):
        momentum_step(theta, np.zeros(3), bad_state, MomentumConfig())


def test_non_finite_gradient_raises_numeric_error():
    theta = np.zeros(3)
    with pytest.raises(NumericError):
        momentum_step(theta, np.array([1.0, np.nan, 0.0]),
                      momentum_state_for(theta), MomentumConfig())
    with pytest.raises(NumericError):
        adam_step(theta, np.array([np.inf, 0.0, 0.0]), adam_state_for(theta), AdamConfig())


def test_non_finite_gradient_error_names_the_layer():
    theta = np.zeros(6)
    layout = (("layer 0 weights", 0, 4), ("layer 0 bias", 4, 6))
    state = adam_state_for(theta, layout)
    grads = np.zeros(6)
    grads[5] = np.nan
    with pytest.raises(NumericError, match="layer 0 bias"):
        adam_step(theta, grads, state, AdamConfig())


def test_config_validation():
    with pytest.raises(ConfigError):
        MomentumConfig(learning_rate=0.0)
    with pytest.raises(ConfigError):
        MomentumConfig(momentum=1.0)
    with pytest.raises(ConfigError):
        AdamConfig(alpha=-1.0)
    with pytest.raises(ConfigError):
        AdamConfig(beta2=1.0)
    with pytest.raises(ConfigError):
        AdamConfig(epsilon=0.0)


def test_adam_defaults_are_the_standard_recommendations():
    cfg = AdamConfig()
    assert (cfg.alpha, cfg.beta1, cfg.beta2, cfg.epsilon) == (0.001, 0.9, 0.999, 1e-8)
