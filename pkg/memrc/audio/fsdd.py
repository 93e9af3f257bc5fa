from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from memrc.audio.mfcc import mfcc
from memrc.audio.wav import load_wav, pad_or_truncate, parse_fsdd_filename
from memrc.errors import FormatError, IngestionError
from memrc.models.audio import NUM_MFCC, AudioClip, FeatureConfig
from memrc.utils.concurrency import map_in_threads


def load_fsdd(root: Union[str, Path]) -> List[AudioClip]:
    root = Path(root)
    if not root.is_dir():
        raise IngestionError(str(root), "FSDD directory not found")
    paths = sorted(root.glob("*.wav"))
    if not paths:
        raise IngestionError(str(root), "FSDD directory contains no .wav files")
    for path in paths:
        if parse_fsdd_filename(path.name) is None:
            raise FormatError("filename", f"{path.name} does not follow digit_speaker_index.wav")
    clips = [load_wav(path) for path in paths]
    speakers = {clip.speaker for clip in clips}
    logger.info(f"Loaded {len(clips)} clips from {len(speakers)} speakers in {root}")
    return clips


def split_random(
    clips: Sequence[AudioClip], test_fraction: float, rng: np.random.Generator
) -> Tuple[List[AudioClip], List[AudioClip]]:
    if not 0 < test_fraction < 1:
        raise ValueError("test_fraction must be in (0, 1)")
    order = rng.permutation(len(clips))
    n_test = max(1, int(round(test_fraction * len(clips))))
    test_idx = set(order[:n_test].tolist())
    train = [clip for i, clip in enumerate(clips) if i not in test_idx]
    test = [clip for i, clip in enumerate(clips) if i in test_idx]
    return train, test


def split_by_speaker(
    clips: Sequence[AudioClip], test_speakers: Iterable[str]
) -> Tuple[List[AudioClip], List[AudioClip]]:
    held_out = set(test_speakers)
    unknown = held_out - {clip.speaker for clip in clips}
    if unknown:
        raise ValueError(f"unknown test speaker(s): {sorted(unknown)}")
    train = [clip for clip in clips if clip.speaker not in held_out]
    test = [clip for clip in clips if clip.speaker in held_out]
    return train, test


class FeatureCache:
    """One CSV per clip: rows are frames, 13 columns of cepstral coefficients."""

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path_for(self, key: str) -> Path:
        return self.directory / f"{key}.csv"

    def load(self, key: str) -> Optional[np.ndarray]:
        path = self.path_for(key)
        if not path.exists():
            return None
        return np.atleast_2d(np.loadtxt(path, delimiter=",", ndmin=2))

    def store(self, key: str, matrix: np.ndarray):
        tmp = self.path_for(key).with_suffix(".csv.tmp")
        np.savetxt(tmp, matrix, delimiter=",", fmt="%.17g")
        tmp.replace(self.path_for(key))


def clip_features(clip: AudioClip, config: FeatureConfig) -> np.ndarray:
    return mfcc(pad_or_truncate(clip, config.clip_samples), config.mfcc)


def extract_features(
    clips: Sequence[AudioClip],
    config: FeatureConfig,
    cache: Optional[FeatureCache] = None,
    max_concurrency: Optional[int] = None,
) -> Dict[str, np.ndarray]:
    """MFCC matrices keyed by clip key; extraction runs concurrently, results merge by key."""

    def extract(clip: AudioClip) -> np.ndarray:
        if cache is not None and clip.key is not None:
            cached = cache.load(clip.key)
            if cached is not None and cached.shape[1] == NUM_MFCC:
                return cached
        features = clip_features(clip, config)
        if cache is not None and clip.key is not None:
            cache.store(clip.key, features)
        return features

    keys = [clip.key or str(i) for i, clip in enumerate(clips)]
    if len(set(keys)) != len(keys):
        raise ValueError("clip keys must be unique")
    matrices = map_in_threads(extract, list(clips), max_concurrency=max_concurrency)
    return dict(zip(keys, matrices))
