import numpy as np
import pytest
from pydantic.v1 import ValidationError

from memrc.errors import ConfigError, InputShapeError
from memrc.models.readout import LossType, OutputActivation
from memrc.readout.network import DenseLayer, ReadoutNetwork, forward, gradients, loss_value


def _single_layer(weights, biases=None, output=OutputActivation.IDENTITY) -> ReadoutNetwork:
    weights = np.atleast_2d(np.asarray(weights, dtype=float))
    biases = np.zeros(weights.shape[1]) if biases is None else biases
    return ReadoutNetwork(layers=[DenseLayer(weights=weights, biases=biases)], output=output)


def test_zero_softmax_net_is_uniform():
    net = _single_layer(np.zeros((4, 10)), output=OutputActivation.SOFTMAX)
    assert forward(net, np.ones(4)) == pytest.approx(np.full(10, 0.1))


def test_identity_layer_reproduces_input():
    net = _single_layer(np.eye(3))
    x = np.array([0.2, -0.7, 0.9])
    assert forward(net, x) == pytest.approx(x)
    assert net.predict(np.vstack([x, 2 * x])) == pytest.approx(np.vstack([x, 2 * x]))


def test_softmax_outputs_sum_to_one(rng):
    for _ in range(1000):
        net = ReadoutNetwork.create([5, 7, 4], OutputActivation.SOFTMAX, rng)
        assert forward(net, rng.random(5)).sum() == pytest.approx(1.0, abs=1e-9)


def test_forward_shape_mismatch(rng):
    net = ReadoutNetwork.create([5, 3], OutputActivation.SOFTMAX, rng)
    with pytest.raises(InputShapeError):
        forward(net, np.zeros(4))


def test_create_uses_he_equivalent_gain(rng):
    net = ReadoutNetwork.create([32, 128, 64, 10], OutputActivation.SOFTMAX, rng)
    assert net.sizes == [32, 128, 64, 10]
    assert net.layers[0].gain == pytest.approx(np.sqrt(6 / 32))
    assert all(np.abs(layer.weights).max() <= 1.0 for layer in net.layers)
    assert all(not layer.biases.any() for layer in net.layers)


def test_create_needs_two_sizes(rng):
    with pytest.raises(ConfigError):
        ReadoutNetwork.create([5], OutputActivation.SOFTMAX, rng)


def test_layers_must_chain():
    first = DenseLayer(weights=np.zeros((2, 3)), biases=np.zeros(3))
    second = DenseLayer(weights=np.zeros((4, 1)), biases=np.zeros(1))
    with pytest.raises(ValidationError):
        ReadoutNetwork(layers=[first, second])


def test_weights_must_be_representable():
    with pytest.raises(ValidationError):
        DenseLayer(weights=np.full((2, 2), 1.5), biases=np.zeros(2))


def test_single_linear_neuron_gradient():
    w, x, t = 0.4, 0.8, 0.1
    net = _single_layer([[w]])
    d_weights, d_biases = gradients(net, np.array([[x]]), np.array([[t]]), LossType.MSE)[0]
    assert d_weights[0, 0] == pytest.approx(2 * (w * x - t) * x)
    assert d_biases[0] == pytest.approx(2 * (w * x - t))


def test_perfect_prediction_has_zero_gradient():
    net = _single_layer(np.eye(2))
    x = np.array([[0.3, 0.6]])
    for d_weights, d_biases in gradients(net, x, x, "mse"):
        assert not d_weights.any()
        assert not d_biases.any()


def test_cross_entropy_needs_softmax():
    net = _single_layer(np.eye(2))
    with pytest.raises(ConfigError):
        gradients(net, np.zeros((1, 2)), np.zeros((1, 2)), LossType.CROSS_ENTROPY)
    with pytest.raises(ConfigError):
        loss_value(net, np.zeros((1, 2)), np.zeros((1, 2)), "hinge")


def _numerical_gradients(net, x, t, loss, h=1e-5):
    numerical = []
    for layer_index, (weights, biases) in enumerate(net.parameters()):
        estimates = []
        for values in (weights, biases):
            estimate = np.zeros_like(values)
            for index in np.ndindex(values.shape):
                shifted = []
                for delta in (h, -h):
                    params = [(w.copy(), b.copy()) for w, b in net.parameters()]
                    target = params[layer_index][0 if values is weights else 1]
                    target[index] += delta
                    shifted.append(loss_value(net.with_parameters(params), x, t, loss))
                estimate[index] = (shifted[0] - shifted[1]) / (2 * h)
            estimates.append(estimate)
        numerical.append(tuple(estimates))
    return numerical


@pytest.mark.parametrize(
    "output,loss",
    [
        (OutputActivation.SOFTMAX, LossType.CROSS_ENTROPY),
        (OutputActivation.SOFTMAX, LossType.MSE),
        (OutputActivation.IDENTITY, LossType.MSE),
    ],
)
def test_gradients_match_finite_differences(rng, output, loss):
    agreeing, total = 0, 0
    for _ in range(100):
        net = ReadoutNetwork.create([4, 6, 5, 3], output, rng)
        net = net.with_parameters(
            [(w * 0.9, rng.uniform(-0.5, 0.5, size=b.shape)) for w, b in net.parameters()]
        )
        x = rng.random((8, 4))
        t = np.eye(3)[rng.integers(0, 3, size=8)]
        analytic = gradients(net, x, t, loss)
        numerical = _numerical_gradients(net, x, t, loss)
        for pair_a, pair_n in zip(analytic, numerical):
            for a, n in zip(pair_a, pair_n):
                close = np.abs(a - n) <= 1e-4 * np.maximum(np.abs(a), np.abs(n)) + 1e-8
                agreeing += int(close.sum())
                total += close.size
    assert agreeing / total >= 0.99
