from enum import Enum
from typing import Optional

import numpy as np
from pydantic.v1 import validator

from memrc.models.model import ArrayModel, BaseModel

FSDD_SAMPLE_RATE = 8000
FSDD_CLIP_SAMPLES = 16000
NUM_MFCC = 13


class SamplingRate(int, Enum):
    RATE_8000 = 8000


class SplitStrategy(str, Enum):
    RANDOM = "random"
    SPEAKER = "speaker"


class AudioClip(ArrayModel):
    samples: np.ndarray
    sample_rate: SamplingRate = SamplingRate.RATE_8000
    label: Optional[int] = None
    speaker: Optional[str] = None
    key: Optional[str] = None

    @validator("samples", pre=True)
    def samples_must_be_normalized(cls, v):
        v = np.array(v, dtype=float)
        if v.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if v.size and np.abs(v).max() > 1.0:
            raise ValueError("samples must lie in [-1, 1]")
        v.setflags(write=False)
        return v

    @validator("label")
    def label_must_be_digit(cls, v):
        if v is not None and not 0 <= v <= 9:
            raise ValueError("label must be a digit 0-9")
        return v

    def with_samples(self, samples: np.ndarray) -> "AudioClip":
        return AudioClip(
            samples=samples,
            sample_rate=self.sample_rate,
            label=self.label,
            speaker=self.speaker,
            key=self.key,
        )


class MfccConfig(BaseModel):
    frame_len: int = 256
    hop: int = 128
    n_mel: int = 26
    n_coeff: int = NUM_MFCC
    pre_emphasis: float = 0.97
    window: str = "hann"
    log_floor: float = 1e-10

    @validator("frame_len")
    def frame_len_must_be_power_of_two(cls, v):
        if v < 2 or v & (v - 1):
            raise ValueError("must be a power of two")
        return v

    @validator("hop", "n_mel")
    def must_be_positive(cls, v):
        if v < 1:
            raise ValueError("must be positive")
        return v

    @validator("n_coeff")
    def thirteen_coefficients(cls, v):
        if v != NUM_MFCC:
            raise ValueError(f"must be {NUM_MFCC}")
        return v

    @validator("window")
    def window_must_be_hann(cls, v):
        if v != "hann":
            raise ValueError("only the Hann window is supported")
        return v

    def frame_count(self, num_samples: int) -> int:
        if num_samples < self.frame_len:
            return 0
        return (num_samples - self.frame_len) // self.hop + 1


class FeatureConfig(BaseModel):
    mfcc: MfccConfig = MfccConfig()
    clip_samples: int = FSDD_CLIP_SAMPLES
    cache_dir: Optional[str] = None
