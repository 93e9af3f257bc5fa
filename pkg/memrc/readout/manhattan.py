"""
Device-constrained weight updates.

A weight w in [-1, 1] stands for a conductance g = g_min + (w + 1) / 2 * (g_max - g_min). The
Manhattan rule moves every weight with a nonzero gradient by one learning-rate step against the
gradient sign; the step is the weight span divided by the pulse count of a full potentiation or
depression sweep, so a full sweep of pulses crosses the whole range.

The stochastic pulse variant keeps the same fixed step but fires it only where row and column pulse
trains coincide. The coincidence probability of a weight is its gradient magnitude relative to the
largest one in the same array, scaled by `pulse_probability`, so the expected update follows the
gradient instead of its sign alone.
"""

from typing import Optional, Tuple

import numpy as np

from memrc.device.synapse import apply_pulses
from memrc.errors import InputShapeError
from memrc.models.device import SynapseParams
from memrc.models.readout import TrainConfig, WeightUpdateRule
from memrc.readout.network import Parameters, ReadoutNetwork

WEIGHT_MIN = -1.0
WEIGHT_MAX = 1.0
WEIGHT_SPAN = WEIGHT_MAX - WEIGHT_MIN


def learning_rates(synapse: SynapseParams) -> Tuple[float, float]:
    """(potentiation, depression) step in weight units."""
    return WEIGHT_SPAN / synapse.n_pot, WEIGHT_SPAN / synapse.n_dep


def weight_to_conductance(w: np.ndarray, synapse: SynapseParams) -> np.ndarray:
    return synapse.g_min + (np.asarray(w) - WEIGHT_MIN) / WEIGHT_SPAN * synapse.span


def conductance_to_weight(g: np.ndarray, synapse: SynapseParams) -> np.ndarray:
    return WEIGHT_MIN + (np.asarray(g) - synapse.g_min) / synapse.span * WEIGHT_SPAN


def _check_shapes(net: ReadoutNetwork, grads: Parameters):
    if len(grads) != len(net.layers):
        raise InputShapeError(f"{len(grads)} gradient layers for {len(net.layers)} network layers")
    for (weights, biases), (d_weights, d_biases) in zip(net.parameters(), grads):
        if weights.shape != np.shape(d_weights) or biases.shape != np.shape(d_biases):
            raise InputShapeError("gradient shapes do not match the network")


def _manhattan_step(
    values: np.ndarray,
    grad: np.ndarray,
    config: TrainConfig,
    rng: Optional[np.random.Generator],
) -> np.ndarray:
    lr_pot, lr_dep = learning_rates(config.synapse)
    sign = np.sign(grad)
    # a negative gradient raises the weight, which is a potentiation pulse
    step = np.where(sign < 0, lr_pot, lr_dep)
    if config.noise_enabled and config.synapse.c2c_sigma > 0:
        if rng is None:
            raise ValueError("a random source is required when noise is enabled")
        step = step * (1.0 + rng.normal(0.0, config.synapse.c2c_sigma, size=values.shape))
    return np.clip(values - sign * step, WEIGHT_MIN, WEIGHT_MAX)


def _pulse_step(
    values: np.ndarray,
    grad: np.ndarray,
    config: TrainConfig,
    rng: Optional[np.random.Generator],
) -> np.ndarray:
    # a weight fires with probability proportional to its share of the largest gradient
    if rng is None:
        raise ValueError("a random source is required for stochastic pulses")
    magnitude = np.abs(grad)
    largest = magnitude.max() if magnitude.size else 0.0
    if largest == 0:
        return np.array(values, dtype=float)
    fired = rng.random(np.shape(values)) < config.pulse_probability * magnitude / largest
    return _manhattan_step(values, np.where(fired, grad, 0.0), config, rng)


def _device_step(
    values: np.ndarray,
    grad: np.ndarray,
    config: TrainConfig,
    rng: Optional[np.random.Generator],
) -> np.ndarray:
    synapse = config.synapse if config.noise_enabled else config.synapse.noiseless()
    g = weight_to_conductance(values, synapse)
    g = apply_pulses(g, -np.sign(grad), synapse, rng)
    return np.clip(conductance_to_weight(g, synapse), WEIGHT_MIN, WEIGHT_MAX)


def manhattan_update(
    net: ReadoutNetwork,
    grads: Parameters,
    config: TrainConfig,
    rng: Optional[np.random.Generator] = None,
) -> ReadoutNetwork:
    _check_shapes(net, grads)
    step = _manhattan_step
    if config.weight_update == WeightUpdateRule.NONLINEAR_DEVICE:
        step = _device_step
    elif config.weight_update == WeightUpdateRule.STOCHASTIC_PULSE:
        step = _pulse_step
    updated = [
        (step(weights, d_weights, config, rng), step(biases, d_biases, config, rng))
        for (weights, biases), (d_weights, d_biases) in zip(net.parameters(), grads)
    ]
    return net.with_parameters(updated)
