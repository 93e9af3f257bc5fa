from typing import Optional, Tuple

import numpy as np
from loguru import logger

from memrc.errors import EmptyInputError, InputShapeError
from memrc.models.readout import (
    EpochRecord,
    LossType,
    TrainConfig,
    TrainHistory,
    TrainingMode,
)
from memrc.readout.manhattan import manhattan_update
from memrc.readout.network import ReadoutNetwork, forward, gradients, loss_value
from memrc.utils.rng import NOISE, TRAIN, substream


def one_hot(labels: np.ndarray, num_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=int)
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise InputShapeError(f"labels must lie in [0, {num_classes})")
    encoded = np.zeros((labels.size, num_classes))
    encoded[np.arange(labels.size), labels] = 1.0
    return encoded


def accuracy(net: ReadoutNetwork, inputs: np.ndarray, targets: np.ndarray) -> float:
    predicted = forward(net, inputs).argmax(axis=1)
    return float((predicted == np.asarray(targets).argmax(axis=1)).mean())


def _as_targets(targets: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(targets, dtype=float).reshape(n, -1)


def _eval_metric(
    net: ReadoutNetwork,
    config: TrainConfig,
    eval_inputs: Optional[np.ndarray],
    eval_targets: Optional[np.ndarray],
) -> Optional[float]:
    if eval_inputs is None or eval_targets is None or len(eval_inputs) == 0:
        return None
    eval_targets = _as_targets(eval_targets, len(eval_inputs))
    if config.loss == LossType.CROSS_ENTROPY:
        return accuracy(net, eval_inputs, eval_targets)
    return loss_value(net, eval_inputs, eval_targets, config.loss)


def _validation_split(
    inputs: np.ndarray, targets: np.ndarray, fraction: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(fit inputs, fit targets, validation inputs, validation targets); the tail is held out."""
    n_val = int(round(fraction * len(inputs)))
    if fraction > 0:
        n_val = max(n_val, 1)
    if n_val >= len(inputs):
        raise EmptyInputError("the validation tail leaves no training samples")
    cut = len(inputs) - n_val
    return inputs[:cut], targets[:cut], inputs[cut:], targets[cut:]


def _improves(candidate: float, best: Optional[float], classification: bool) -> bool:
    if best is None:
        return True
    return candidate > best if classification else candidate < best


def _offline_epoch(
    net: ReadoutNetwork,
    inputs: np.ndarray,
    targets: np.ndarray,
    config: TrainConfig,
    order_rng: np.random.Generator,
    noise_rng: np.random.Generator,
) -> ReadoutNetwork:
    n = len(inputs)
    order = order_rng.permutation(n) if config.shuffle else np.arange(n)
    for start in range(0, n, config.batch_size):
        batch = order[start : start + config.batch_size]
        grads = gradients(net, inputs[batch], targets[batch], config.loss)
        net = manhattan_update(net, grads, config, noise_rng)
    return net


def _online_epoch(
    net: ReadoutNetwork,
    inputs: np.ndarray,
    targets: np.ndarray,
    config: TrainConfig,
    noise_rng: np.random.Generator,
    history: TrainHistory,
) -> ReadoutNetwork:
    # samples arrive in stream order; each is predicted before the weights learn from it
    for x, t in zip(inputs, targets):
        prediction = forward(net, x)
        history.online_errors.append(float(np.abs(prediction - t).sum()))
        grads = gradients(net, x[None, :], t[None, :], config.loss)
        net = manhattan_update(net, grads, config, noise_rng)
    return net


def train(
    net: ReadoutNetwork,
    inputs: np.ndarray,
    targets: np.ndarray,
    config: TrainConfig,
    eval_inputs: Optional[np.ndarray] = None,
    eval_targets: Optional[np.ndarray] = None,
) -> Tuple[ReadoutNetwork, TrainHistory]:
    """
    Trains the readout with device-constrained updates.

    Offline mode applies one update per (shuffled) batch; online mode streams the samples in
    order and updates after each one. Targets are one-hot rows for classification or one column
    per regression output. The returned history has one record per epoch.

    With `validation_fraction` > 0 the tail of the training data is held out, scored after every
    epoch, and the weights of the best-scoring epoch are returned instead of the last ones.
    """
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim != 2 or len(inputs) == 0:
        raise EmptyInputError("training needs a nonempty 2-D input matrix")
    targets = _as_targets(targets, len(inputs))
    inputs, targets, val_inputs, val_targets = _validation_split(
        inputs, targets, config.validation_fraction
    )
    validating = len(val_inputs) > 0

    history = TrainHistory()
    order_rng = substream(config.seed, TRAIN)
    noise_rng = substream(config.seed, NOISE)
    classification = config.loss == LossType.CROSS_ENTROPY
    best_net, best_metric = net, None

    for epoch in range(1, config.epochs + 1):
        if config.mode == TrainingMode.ONLINE:
            net = _online_epoch(net, inputs, targets, config, noise_rng, history)
        else:
            net = _offline_epoch(net, inputs, targets, config, order_rng, noise_rng)
        record = EpochRecord(
            epoch=epoch,
            loss=loss_value(net, inputs, targets, config.loss),
            accuracy=accuracy(net, inputs, targets) if classification else None,
            eval_metric=_eval_metric(net, config, eval_inputs, eval_targets),
            validation_metric=(
                _eval_metric(net, config, val_inputs, val_targets) if validating else None
            ),
        )
        history.epochs.append(record)
        metric = record.validation_metric
        if metric is not None and _improves(metric, best_metric, classification):
            best_net, best_metric = net, metric
            history.best_epoch = epoch
        logger.debug(
            f"Epoch {epoch}/{config.epochs}: loss={record.loss:.6f} "
            f"accuracy={record.accuracy} eval={record.eval_metric} "
            f"validation={record.validation_metric}"
        )
    if history.epochs:
        final_loss = history.epochs[-1].loss
        logger.info(f"Trained readout for {config.epochs} epochs, final loss {final_loss:.6f}")
    if validating and history.best_epoch is not None:
        logger.info(f"Keeping epoch {history.best_epoch}, validation metric {best_metric:.6f}")
        return best_net, history
    return net, history
