"""
Nonlinear time-series prediction.

The target obeys y[k] = 0.1 y[k-1] + 0.2 y[k-2] y[k-3] + 0.3 u[k]^3 + 0.25 with zero history. Each
prediction sees the window u[k]..u[k+4]: every input drives its own reservoir node as a 4-bit
stream, and the readout maps the node states to y[k].
"""

from typing import List, Tuple

import numpy as np
from loguru import logger
from numpy.lib.stride_tricks import sliding_window_view

from memrc.errors import EmptyInputError
from memrc.models.model import BaseModel
from memrc.models.readout import OutputActivation, TrainHistory
from memrc.models.tasks import (
    SERIES_WINDOW,
    MetricsReport,
    TimeSeriesConfig,
    TimeSeriesExperimentConfig,
)
from memrc.readout.network import ReadoutNetwork
from memrc.readout.trainer import train
from memrc.reservoir.mask import identity_mask
from memrc.reservoir.reservoir import Reservoir
from memrc.tasks.metrics import nrmse
from memrc.utils.rng import INIT, SERIES, substream


def narma_recurrence(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    y = np.zeros(u.size)
    for k in range(u.size):
        y1 = y[k - 1] if k >= 1 else 0.0
        y2 = y[k - 2] if k >= 2 else 0.0
        y3 = y[k - 3] if k >= 3 else 0.0
        y[k] = 0.1 * y1 + 0.2 * y2 * y3 + 0.3 * u[k] ** 3 + 0.25
    return y


def generate_series(config: TimeSeriesConfig) -> Tuple[np.ndarray, np.ndarray]:
    u = substream(config.seed, SERIES).uniform(0.0, 1.0, size=config.length)
    return u, narma_recurrence(u)


def input_windows(u: np.ndarray, y: np.ndarray, washout: int) -> Tuple[np.ndarray, np.ndarray]:
    """(windows u[k..k+4], targets y[k]) for every k >= washout whose window fits."""
    windows = sliding_window_view(u, SERIES_WINDOW)[washout:]
    if len(windows) == 0:
        raise EmptyInputError(f"series of length {u.size} leaves no windows after washout")
    return windows, y[washout : washout + len(windows)]


def standardize(train: np.ndarray, data: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(scaled data, mean, std) from the training rows; constant columns keep unit std."""
    mean = train.mean(axis=0)
    std = train.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    return (data - mean) / std, mean, std


class TimeSeriesResult(BaseModel):
    metrics: MetricsReport
    history: TrainHistory
    net: ReadoutNetwork
    # (k, y, y_hat) over the held-out tail
    trace: List[Tuple[int, float, float]]


def run_timeseries_experiment(config: TimeSeriesExperimentConfig) -> TimeSeriesResult:
    series = config.series
    u, y = generate_series(series)
    windows, targets = input_windows(u, y, series.washout)
    n_train = int(round(series.train_fraction * len(windows)))
    if n_train < 1 or n_train >= len(windows):
        raise EmptyInputError("not enough samples after washout for a train/test split")

    reservoir = Reservoir.build(
        config.reservoir,
        config.device,
        num_features=SERIES_WINDOW,
        seed=config.seed,
        mask=identity_mask(SERIES_WINDOW),
    )
    # one frame per window, each node reading one input
    states = reservoir.transform(windows)
    # the readout trains on standardized reads and targets; losses are in those units
    states, _, _ = standardize(states[:n_train], states)
    scaled_targets, y_mean, y_std = standardize(targets[:n_train], targets)

    sizes = [reservoir.state_dim, *config.train.hidden_sizes, 1]
    net = ReadoutNetwork.create(sizes, OutputActivation.IDENTITY, substream(config.seed, INIT))
    logger.info(
        f"Time series: {n_train} train / {len(windows) - n_train} test samples, "
        f"readout {'-'.join(map(str, sizes))}, {config.train.mode.value} training"
    )
    net, history = train(
        net,
        states[:n_train],
        scaled_targets[:n_train],
        config.train,
        eval_inputs=states[n_train:],
        eval_targets=scaled_targets[n_train:],
    )

    predictions = y_mean + y_std * net.predict(states[n_train:])[:, 0]
    score, degenerate = nrmse(targets[n_train:], predictions)
    steps = np.arange(len(windows))[n_train:] + series.washout
    logger.info(f"Time series NRMSE {score:.4f}{' (degenerate target)' if degenerate else ''}")
    return TimeSeriesResult(
        metrics=MetricsReport(
            nrmse=score,
            nrmse_degenerate=degenerate,
            num_train=n_train,
            num_test=len(windows) - n_train,
            seed=config.seed,
        ),
        history=history,
        net=net,
        trace=[
            (int(k), float(t), float(p))
            for k, t, p in zip(steps, targets[n_train:], predictions)
        ],
    )
