from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from memrc.audio.fsdd import (
    FeatureCache,
    extract_features,
    load_fsdd,
    split_by_speaker,
    split_random,
)
from memrc.audio.normalizer import Normalizer, apply_normalizer, fit_normalizer
from memrc.audio.wav import add_gaussian_noise
from memrc.errors import ConfigError, EmptyInputError, IngestionError
from memrc.models.audio import NUM_MFCC, AudioClip, SplitStrategy
from memrc.models.model import BaseModel
from memrc.models.readout import LossType, OutputActivation, TrainHistory
from memrc.models.tasks import NUM_DIGITS, FsddExperimentConfig, MetricsReport
from memrc.readout.network import ReadoutNetwork
from memrc.readout.trainer import one_hot, train
from memrc.reservoir.reservoir import Reservoir
from memrc.settings import get_settings
from memrc.tasks.metrics import evaluate
from memrc.utils.rng import AUDIO_NOISE, INIT, SPLIT, substream


class FsddResult(BaseModel):
    metrics: MetricsReport
    history: TrainHistory
    net: ReadoutNetwork


def resolve_data_dir(config: FsddExperimentConfig) -> Path:
    if config.fsdd.data_dir is not None:
        return Path(config.fsdd.data_dir)
    data = get_settings().data
    if data is None:
        raise IngestionError(
            "MEMRC_DATA", "no FSDD directory; set fsdd.data_dir or the environment variable"
        )
    return data


def split_clips(
    clips: Sequence[AudioClip], config: FsddExperimentConfig
) -> Tuple[List[AudioClip], List[AudioClip]]:
    if config.fsdd.split == SplitStrategy.SPEAKER:
        return split_by_speaker(clips, config.fsdd.test_speakers)
    return split_random(clips, config.fsdd.test_fraction, substream(config.seed, SPLIT))


def add_noise(clips: Sequence[AudioClip], sigma: float, seed: int) -> List[AudioClip]:
    """Gaussian noise on every clip, drawn in clip order from one substream."""
    if sigma == 0:
        return list(clips)
    rng = substream(seed, AUDIO_NOISE)
    return [add_gaussian_noise(clip, sigma, rng) for clip in clips]


def _labels(clips: Sequence[AudioClip]) -> np.ndarray:
    if any(clip.label is None for clip in clips):
        raise ConfigError("every FSDD clip needs a digit label")
    return np.array([clip.label for clip in clips], dtype=int)


def reservoir_features(
    reservoir: Reservoir,
    matrices: Sequence[np.ndarray],
    normalizer: Normalizer,
) -> np.ndarray:
    """Pooled reservoir state per clip, one row each."""
    return np.stack(
        [reservoir.features(apply_normalizer(matrix, normalizer)) for matrix in matrices]
    )


def run_fsdd_experiment(
    config: FsddExperimentConfig, clips: Optional[Sequence[AudioClip]] = None
) -> FsddResult:
    """
    Spoken-digit pipeline: WAV -> MFCC -> normalization (fit on the training split only) -> masked
    4-bit encoding -> reservoir lookup -> pooled state -> 10-way softmax readout.
    """
    if config.train.loss != LossType.CROSS_ENTROPY:
        raise ConfigError("digit classification trains with cross_entropy", key="train.loss")
    if clips is None:
        clips = load_fsdd(resolve_data_dir(config))
    clips = add_noise(clips, config.fsdd.noise_sigma, config.seed)
    train_clips, test_clips = split_clips(clips, config)
    if not train_clips or not test_clips:
        raise EmptyInputError("the split left an empty train or test set")

    cache = None
    if config.fsdd.features.cache_dir is not None and config.fsdd.noise_sigma == 0:
        cache = FeatureCache(config.fsdd.features.cache_dir)
    features: Dict[str, np.ndarray] = extract_features(
        list(train_clips) + list(test_clips),
        config.fsdd.features,
        cache=cache,
        max_concurrency=config.fsdd.max_concurrency,
    )
    keys = list(features)
    train_matrices = [features[key] for key in keys[: len(train_clips)]]
    test_matrices = [features[key] for key in keys[len(train_clips) :]]

    normalizer = fit_normalizer(train_matrices)
    reservoir = Reservoir.build(config.reservoir, config.device, NUM_MFCC, seed=config.seed)
    x_train = reservoir_features(reservoir, train_matrices, normalizer)
    x_test = reservoir_features(reservoir, test_matrices, normalizer)
    y_train, y_test = _labels(train_clips), _labels(test_clips)

    sizes = [reservoir.state_dim, *config.train.hidden_sizes, NUM_DIGITS]
    net = ReadoutNetwork.create(sizes, OutputActivation.SOFTMAX, substream(config.seed, INIT))
    logger.info(
        f"FSDD: {len(train_clips)} train / {len(test_clips)} test clips, "
        f"readout {'-'.join(map(str, sizes))}, noise sigma {config.fsdd.noise_sigma}"
    )
    net, history = train(
        net,
        x_train,
        one_hot(y_train, NUM_DIGITS),
        config.train,
        eval_inputs=x_test,
        eval_targets=one_hot(y_test, NUM_DIGITS),
    )
    metrics = evaluate(net, x_test, y_test)
    metrics.num_train = len(train_clips)
    metrics.seed = config.seed
    logger.info(f"FSDD test accuracy {metrics.accuracy:.4f}")
    return FsddResult(metrics=metrics, history=history, net=net)
