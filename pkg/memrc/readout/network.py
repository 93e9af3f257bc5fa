"""
Feedforward readout. Weights are unitless values in [-1, 1], one per synapse, mapped affinely onto
the conductance range of the device; the forward pass itself is ideal arithmetic.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic.v1 import root_validator, validator

from memrc.errors import ConfigError, InputShapeError
from memrc.models.model import ArrayModel
from memrc.models.readout import LossType, OutputActivation

Parameters = List[Tuple[np.ndarray, np.ndarray]]


class DenseLayer(ArrayModel):
    weights: np.ndarray
    biases: np.ndarray
    # fixed peripheral scaling of the column sums
    gain: float = 1.0

    @validator("weights", "biases", pre=True)
    def as_float_array(cls, v):
        return np.array(v, dtype=float)

    @root_validator(skip_on_failure=True)
    def shapes_and_range(cls, values):
        weights, biases = values["weights"], values["biases"]
        if weights.ndim != 2 or biases.shape != (weights.shape[1],):
            raise ValueError(f"weights {weights.shape} and biases {biases.shape} do not match")
        for name in ("weights", "biases"):
            if np.abs(values[name]).max(initial=0.0) > 1.0:
                raise ValueError(f"{name} must lie in [-1, 1]")
        return values

    @property
    def fan_in(self) -> int:
        return self.weights.shape[0]

    @property
    def fan_out(self) -> int:
        return self.weights.shape[1]


class ReadoutNetwork(ArrayModel):
    layers: List[DenseLayer]
    output: OutputActivation = OutputActivation.SOFTMAX

    @validator("layers")
    def layers_must_chain(cls, v):
        if not v:
            raise ValueError("a readout needs at least one layer")
        for previous, layer in zip(v, v[1:]):
            if previous.fan_out != layer.fan_in:
                raise ValueError(
                    f"layer of width {previous.fan_out} feeds one expecting {layer.fan_in}"
                )
        return v

    @classmethod
    def create(
        cls,
        sizes: Sequence[int],
        output: OutputActivation,
        rng: np.random.Generator,
        gain: Optional[float] = None,
    ) -> "ReadoutNetwork":
        """Uniform [-1, 1] weights, zero biases, He-equivalent gain sqrt(6 / fan_in) by default."""
        if len(sizes) < 2:
            raise ConfigError("a readout needs input and output sizes")
        layers = [
            DenseLayer(
                weights=rng.uniform(-1.0, 1.0, size=(fan_in, fan_out)),
                biases=np.zeros(fan_out),
                gain=math.sqrt(6.0 / fan_in) if gain is None else gain,
            )
            for fan_in, fan_out in zip(sizes[:-1], sizes[1:])
        ]
        return cls(layers=layers, output=output)

    @property
    def input_dim(self) -> int:
        return self.layers[0].fan_in

    @property
    def output_dim(self) -> int:
        return self.layers[-1].fan_out

    @property
    def sizes(self) -> List[int]:
        return [self.input_dim] + [layer.fan_out for layer in self.layers]

    def parameters(self) -> Parameters:
        return [(layer.weights, layer.biases) for layer in self.layers]

    def with_parameters(self, parameters: Parameters) -> "ReadoutNetwork":
        """New network with the same gains; values are trusted to already lie in [-1, 1]."""
        layers = [
            DenseLayer.construct(weights=weights, biases=biases, gain=layer.gain)
            for layer, (weights, biases) in zip(self.layers, parameters)
        ]
        return ReadoutNetwork.construct(layers=layers, output=self.output)

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        return forward(self, inputs)


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def log_softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def _as_batch(net: ReadoutNetwork, inputs: np.ndarray) -> Tuple[np.ndarray, bool]:
    inputs = np.asarray(inputs, dtype=float)
    single = inputs.ndim == 1
    batch = inputs[None, :] if single else inputs
    if batch.ndim != 2 or batch.shape[1] != net.input_dim:
        raise InputShapeError(f"expected inputs of width {net.input_dim}, got shape {inputs.shape}")
    return batch, single


def _forward_trace(
    net: ReadoutNetwork, batch: np.ndarray
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    activations, preactivations = [batch], []
    for i, layer in enumerate(net.layers):
        z = layer.gain * (activations[-1] @ layer.weights) + layer.biases
        preactivations.append(z)
        if i < len(net.layers) - 1:
            activations.append(np.maximum(z, 0.0))
    return activations, preactivations


def _output(net: ReadoutNetwork, logits: np.ndarray) -> np.ndarray:
    if net.output == OutputActivation.SOFTMAX:
        return softmax(logits)
    return logits


def forward(net: ReadoutNetwork, inputs: np.ndarray) -> np.ndarray:
    batch, single = _as_batch(net, inputs)
    _, preactivations = _forward_trace(net, batch)
    outputs = _output(net, preactivations[-1])
    return outputs[0] if single else outputs


def _targets(net: ReadoutNetwork, targets: np.ndarray, batch_size: int) -> np.ndarray:
    targets = np.asarray(targets, dtype=float).reshape(batch_size, -1)
    if targets.shape[1] != net.output_dim:
        raise InputShapeError(f"expected targets of width {net.output_dim}, got {targets.shape[1]}")
    return targets


def _check_loss(net: ReadoutNetwork, loss) -> LossType:
    try:
        loss = LossType(loss)
    except ValueError:
        raise ConfigError(f"unknown loss {loss!r}", key="loss")
    if loss == LossType.CROSS_ENTROPY and net.output != OutputActivation.SOFTMAX:
        raise ConfigError("cross_entropy requires a softmax output", key="loss")
    return loss


def loss_value(net: ReadoutNetwork, inputs: np.ndarray, targets: np.ndarray, loss) -> float:
    """Batch-mean loss: sum of squared errors per sample, or categorical cross entropy."""
    loss = _check_loss(net, loss)
    batch, _ = _as_batch(net, inputs)
    targets = _targets(net, targets, batch.shape[0])
    _, preactivations = _forward_trace(net, batch)
    logits = preactivations[-1]
    if loss == LossType.CROSS_ENTROPY:
        return float(-(targets * log_softmax(logits)).sum(axis=1).mean())
    return float(((_output(net, logits) - targets) ** 2).sum(axis=1).mean())


def gradients(net: ReadoutNetwork, inputs: np.ndarray, targets: np.ndarray, loss) -> Parameters:
    """Exact gradients of `loss_value` with respect to every weight and bias."""
    loss = _check_loss(net, loss)
    batch, _ = _as_batch(net, inputs)
    targets = _targets(net, targets, batch.shape[0])
    activations, preactivations = _forward_trace(net, batch)
    outputs = _output(net, preactivations[-1])

    if loss == LossType.CROSS_ENTROPY:
        delta = outputs - targets
    elif net.output == OutputActivation.SOFTMAX:
        upstream = 2.0 * (outputs - targets)
        delta = outputs * (upstream - (outputs * upstream).sum(axis=1, keepdims=True))
    else:
        delta = 2.0 * (outputs - targets)

    n = batch.shape[0]
    grads: Parameters = []
    for i in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[i]
        grads.append((layer.gain * activations[i].T @ delta / n, delta.mean(axis=0)))
        if i > 0:
            delta = (layer.gain * delta @ layer.weights.T) * (preactivations[i - 1] > 0)
    grads.reverse()
    return grads
