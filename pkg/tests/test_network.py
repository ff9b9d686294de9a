import math

import numpy as np
import pytest

from scournet.activations import Activation, activate, activate_derivative
from scournet.errors import ConfigError, ShapeError
from scournet.initializers import InitScheme, init_network
from scournet.model_io import load_network, save_network
from scournet.network import (LayerSpec, NetworkParams, backward, forward, net_input,
                              validate_layer_chain)


# --- activations ---


def test_relu_floor_and_passthrough():
    x = np.array([[-2.0, 0.0, 3.0]])
    out = activate("relu", x)
    assert out[0, 0] == 0.0      # negative inputs are zeroed
    assert out[0, 1] == 0.0
    assert out[0, 2] == 3.0      # positive inputs pass unchanged


def test_relu_idempotent_and_nonnegative():
    rng = np.random.default_rng(3)
    x = rng.normal(scale=5.0, size=(10, 10))
    once = activate("relu", x)
    np.testing.assert_array_equal(activate("relu", once), once)
    assert (once >= 0.0).all()
    pos = np.abs(x)
    np.testing.assert_array_equal(activate("relu", pos), pos)


def test_sigmoid_midpoint_and_derivative():
    zero = np.zeros((1, 1))
    assert activate("sigmoid", zero)[0, 0] == 0.5
    assert activate_derivative("sigmoid", zero)[0, 0] == 0.25


def test_relu_derivative_convention_at_zero():
    net = np.array([[5.0, 0.0, -1.0]])
    d = activate_derivative("relu", net)
    np.testing.assert_array_equal(d, [[1.0, 0.0, 0.0]])


def test_tanh_and_identity():
    x = np.array([[0.3, -0.7]])
    np.testing.assert_allclose(activate("tanh", x), np.tanh(x), rtol=0, atol=0)
    np.testing.assert_array_equal(activate("identity", x), x)
    np.testing.assert_array_equal(activate_derivative("identity", x), np.ones_like(x))
    np.testing.assert_allclose(activate_derivative("tanh", x), 1 - np.tanh(x) ** 2,
                               rtol=0, atol=1e-16)


def test_sigmoid_saturates_without_overflow():
    x = np.array([[-1e6, 1e6]])
    out = activate("sigmoid", x)
    assert out[0, 0] == 0.0 and out[0, 1] == 1.0


def test_unknown_activation_rejected():
    with pytest.raises(ValueError):
        Activation.of("softplus")


# --- topology and net input ---


def test_layer_spec_validation():
    with pytest.raises(ConfigError):
        LayerSpec(0, 3)
    with pytest.raises(ConfigError):
        LayerSpec(3, 3, dropout_rate=1.0)
    with pytest.raises(ConfigError):
        validate_layer_chain([LayerSpec(7, 5), LayerSpec(4, 1)])


def test_net_input_hand_sums():
    w = np.array([[0.5, -1.0]])
    out = net_input(w, np.zeros(1), np.array([[2.0, 3.0]]))
    assert out[0, 0] == -2.0

    w = np.array([[1.0, 1.0]])
    out = net_input(w, np.array([10.0]), np.array([[1.0, 2.0]]))
    assert out[0, 0] == 13.0


def test_net_input_identity_weights():
    x = np.random.default_rng(5).normal(size=(4, 3))
    np.testing.assert_array_equal(net_input(np.eye(3), np.zeros(3), x), x)


def test_net_input_shape_error():
    with pytest.raises(ShapeError):
        net_input(np.ones((2, 3)), np.zeros(2), np.ones((4, 4)))
    with pytest.raises(ShapeError):
        net_input(np.ones((2, 3)), np.zeros(5), np.ones((4, 3)))


# --- forward ---


def _identity_net(width):
    specs = (LayerSpec(width, width, "identity"),)
    params = NetworkParams([np.eye(width)], [np.zeros(width)])
    return specs, params


def test_forward_identity_network():
    specs, params = _identity_net(3)
    batch = np.random.default_rng(0).normal(size=(5, 3))
    trace = forward(params, specs, batch)
    np.testing.assert_array_equal(trace.prediction, batch)


def test_forward_relu_all_negative_preactivations():
    # two relu layers with biases pushed far negative: hidden outputs all zero
    specs = (LayerSpec(2, 3, "relu"), LayerSpec(3, 2, "relu"))
    params = NetworkParams(
        [np.full((3, 2), 0.1), np.full((2, 3), 0.1)],
        [np.full(3, -100.0), np.full(2, -100.0)],
    )
    trace = forward(params, specs, np.ones((4, 2)))
    assert (trace.outputs[0] == 0.0).all()
    assert (trace.outputs[1] == 0.0).all()


def test_forward_trace_records_activation_of_net():
    specs = (LayerSpec(4, 3, "tanh"), LayerSpec(3, 1, "identity"))
    rng = np.random.default_rng(9)
    params = init_network(InitScheme(), specs, rng)
    trace = forward(params, specs, rng.normal(size=(6, 4)))
    for spec, net, out in zip(specs, trace.net_inputs, trace.outputs):
        np.testing.assert_array_equal(activate(spec.activation, net), out)


def test_forward_infer_deterministic_bit_identical():
    specs = (LayerSpec(7, 5, "sigmoid", 0.5), LayerSpec(5, 1, "identity"))
    rng = np.random.default_rng(2)
    params = init_network(InitScheme(), specs, rng)
    batch = rng.normal(size=(8, 7))
    a = forward(params, specs, batch, mode="infer")
    b = forward(params, specs, batch, mode="infer")
    for x, y in zip(a.outputs, b.outputs):
        np.testing.assert_array_equal(x, y)
    assert all(m is None for m in a.dropout_masks)


def test_forward_zero_dropout_train_matches_infer_bitwise():
    specs = (LayerSpec(7, 5, "relu", 0.0), LayerSpec(5, 1, "identity"))
    rng = np.random.default_rng(4)
    params = init_network(InitScheme(), specs, rng)
    batch = rng.normal(size=(6, 7))
    t = forward(params, specs, batch, mode="train", rng=np.random.default_rng(0))
    i = forward(params, specs, batch, mode="infer")
    np.testing.assert_array_equal(t.prediction, i.prediction)


def test_forward_dropout_masks_values_and_scaling():
    specs = (LayerSpec(3, 40, "identity", 0.25), LayerSpec(40, 1, "identity"))
    rng = np.random.default_rng(6)
    params = init_network(InitScheme(), specs, rng)
    trace = forward(params, specs, rng.normal(size=(20, 3)), mode="train",
                    rng=np.random.default_rng(12))
    mask = trace.dropout_masks[0]
    assert mask is not None
    assert set(np.unique(mask)) <= {0.0, 1.0 / 0.75}
    assert trace.dropout_masks[1] is None  # final layer never dropped
    # feeding the next layer uses the masked outputs
    np.testing.assert_array_equal(trace.layer_input(1), trace.outputs[0] * mask)


def test_forward_train_dropout_requires_rng():
    specs = (LayerSpec(3, 4, "relu", 0.5), LayerSpec(4, 1, "identity"))
    params = init_network(InitScheme(), specs, np.random.default_rng(0))
    with pytest.raises(ValueError):
        forward(params, specs, np.ones((2, 3)), mode="train")


def test_forward_batch_width_mismatch():
    specs, params = _identity_net(3)
    with pytest.raises(ShapeError):
        forward(params, specs, np.ones((2, 4)))


# --- backward ---


def test_backward_single_linear_layer_base_case():
    specs = (LayerSpec(3, 1, "identity"),)
    params = NetworkParams([np.zeros((1, 3))], [np.zeros(1)])
    x = np.array([[2.0, -1.0, 4.0]])
    trace = forward(params, specs, x)
    grads = backward(params, trace, np.ones((1, 1)))
    np.testing.assert_array_equal(grads.weights[0], x)
    np.testing.assert_array_equal(grads.biases[0], [1.0])


def test_backward_zero_loss_gradient_gives_zero_grads():
    specs = (LayerSpec(4, 3, "sigmoid"), LayerSpec(3, 1, "identity"))
    rng = np.random.default_rng(8)
    params = init_network(InitScheme(), specs, rng)
    trace = forward(params, specs, rng.normal(size=(5, 4)))
    grads = backward(params, trace, np.zeros((5, 1)))
    for g in grads.weights + grads.biases:
        assert (g == 0.0).all()


def test_backward_gradient_shapes_match_params():
    specs = (LayerSpec(7, 5, "tanh"), LayerSpec(5, 3, "sigmoid"), LayerSpec(3, 1, "identity"))
    rng = np.random.default_rng(10)
    params = init_network(InitScheme(), specs, rng)
    trace = forward(params, specs, rng.normal(size=(4, 7)))
    grads = backward(params, trace, rng.normal(size=(4, 1)))
    for w, gw, b, gb in zip(params.weights, grads.weights, params.biases, grads.biases):
        assert gw.shape == w.shape
        assert gb.shape == b.shape


def test_backward_topology_mismatch():
    specs = (LayerSpec(3, 2, "relu"), LayerSpec(2, 1, "identity"))
    rng = np.random.default_rng(1)
    params = init_network(InitScheme(), specs, rng)
    trace = forward(params, specs, rng.normal(size=(2, 3)))
    other = init_network(InitScheme(), (LayerSpec(3, 1, "identity"),), rng)
    with pytest.raises(ShapeError):
        backward(other, trace, np.zeros((2, 1)))
    with pytest.raises(ShapeError):
        backward(params, trace, np.zeros((2, 5)))


def _mse_and_analytic_grads(params, specs, X, y):
    trace = forward(params, specs, X)
    r = trace.prediction - y
    loss = float((r * r).mean())
    grads = backward(params, trace, r * (2.0 / X.shape[0]))
    return loss, grads


def test_backward_matches_central_finite_differences():
    # independent oracle: central difference of the full MSE loss, h = 1e-6
    specs = (LayerSpec(7, 5, "sigmoid"), LayerSpec(5, 3, "sigmoid"), LayerSpec(3, 1, "identity"))
    rng = np.random.default_rng(42)
    params = init_network(InitScheme(), specs, rng)
    X = rng.normal(size=(4, 7))
    y = rng.normal(size=(4, 1))
    h = 1e-6

    _, grads = _mse_and_analytic_grads(params, specs, X, y)

    def loss_with(k, tensor, idx, delta):
        trial = params.copy()
        target = trial.weights[k] if tensor == "w" else trial.biases[k]
        target[idx] += delta
        trace = forward(trial, specs, X)
        r = trace.prediction - y
        return float((r * r).mean())

    worst = 0.0
    for k in range(len(specs)):
        for tensor, analytic in (("w", grads.weights[k]), ("b", grads.biases[k])):
            for idx in np.ndindex(analytic.shape):
                num = (loss_with(k, tensor, idx, h) - loss_with(k, tensor, idx, -h)) / (2 * h)
                ana = analytic[idx]
                if abs(ana) < 1e-6:
                    assert abs(ana - num) < 1e-8
                else:
                    rel = abs(ana - num) / max(abs(ana), abs(num))
                    worst = max(worst, rel)
                    assert rel < 1e-5
    assert worst < 1e-5


# --- persistence ---


def test_network_round_trip_is_bit_exact(tmp_path):
    specs = (LayerSpec(7, 5, "relu", 0.2), LayerSpec(5, 3, "tanh"), LayerSpec(3, 1, "identity"))
    params = init_network(InitScheme(), specs, np.random.default_rng(77))
    path = tmp_path / "net.txt"
    save_network(path, specs, params)
    loaded_specs, loaded = load_network(path)
    assert loaded_specs == specs
    for a, b in zip(params.weights + params.biases, loaded.weights + loaded.biases):
        assert np.array_equal(a, b)
        assert a.dtype == b.dtype == np.float64


def test_network_file_version_check(tmp_path):
    specs = (LayerSpec(2, 1, "identity"),)
    params = NetworkParams([np.ones((1, 2))], [np.zeros(1)])
    path = tmp_path / "net.txt"
    save_network(path, specs, params)
    text = path.read_text().replace("scournet-network 1", "scournet-network 99")
    path.write_text(text)
    from scournet.errors import SchemaError

    with pytest.raises(SchemaError):
        load_network(path)
