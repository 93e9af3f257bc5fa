from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.fft import dct
from scipy.signal import get_window

from memrc.errors import EmptyInputError
from memrc.models.audio import AudioClip, MfccConfig


def hz_to_mel(hz):
    return 2595.0 * np.log10(1.0 + np.asarray(hz) / 700.0)


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel) / 2595.0) - 1.0)


@lru_cache(maxsize=8)
def mel_filterbank(n_mel: int, frame_len: int, sample_rate: int) -> np.ndarray:
    """n_mel x (frame_len // 2 + 1) triangular filters spanning 0 Hz to Nyquist."""
    mel_points = np.linspace(hz_to_mel(0.0), hz_to_mel(sample_rate / 2.0), n_mel + 2)
    bins = np.floor((frame_len + 1) * mel_to_hz(mel_points) / sample_rate).astype(int)
    filterbank = np.zeros((n_mel, frame_len // 2 + 1))
    for j in range(n_mel):
        left, center, right = bins[j], bins[j + 1], bins[j + 2]
        for i in range(left, center):
            filterbank[j, i] = (i - left) / (center - left)
        for i in range(center, right):
            filterbank[j, i] = (right - i) / (right - center)
    filterbank.setflags(write=False)
    return filterbank


def frame_signal(signal: np.ndarray, frame_len: int, hop: int) -> np.ndarray:
    if signal.size < frame_len:
        raise EmptyInputError(
            f"signal of {signal.size} samples is shorter than one frame ({frame_len})"
        )
    return sliding_window_view(signal, frame_len)[::hop]


def log_mel_energies(samples: np.ndarray, sample_rate: int, config: MfccConfig) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    emphasized = np.append(samples[:1], samples[1:] - config.pre_emphasis * samples[:-1])
    frames = frame_signal(emphasized, config.frame_len, config.hop)
    frames = frames * get_window(config.window, config.frame_len, fftbins=True)
    power = np.abs(np.fft.rfft(frames, n=config.frame_len, axis=1)) ** 2 / config.frame_len
    energies = power @ mel_filterbank(config.n_mel, config.frame_len, sample_rate).T
    return np.log(np.maximum(energies, config.log_floor))


def mfcc(clip: AudioClip, config: MfccConfig = MfccConfig()) -> np.ndarray:
    """frames x 13 cepstral coefficients (coefficient 0 included)."""
    log_energies = log_mel_energies(clip.samples, int(clip.sample_rate), config)
    return dct(log_energies, type=2, axis=1, norm="ortho")[:, : config.n_coeff]
