import re
import wave
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from memrc.errors import FormatError
from memrc.models.audio import FSDD_CLIP_SAMPLES, FSDD_SAMPLE_RATE, AudioClip

FSDD_FILENAME = re.compile(r"^(?P<digit>[0-9])_(?P<speaker>[A-Za-z0-9-]+)_(?P<index>[0-9]+)\.wav$")
SUPPORTED_SAMPLE_WIDTHS = (1, 2)


def parse_fsdd_filename(name: str) -> Optional[Tuple[int, str, int]]:
    """`{digit}_{speaker}_{index}.wav` -> (digit, speaker, index), or None for other names."""
    match = FSDD_FILENAME.match(name)
    if match is None:
        return None
    return int(match["digit"]), match["speaker"], int(match["index"])


def _decode_pcm(raw: bytes, sample_width: int) -> np.ndarray:
    if sample_width == 1:
        # 8-bit WAV is unsigned with a 128 midpoint
        return (np.frombuffer(raw, dtype=np.uint8).astype(float) - 128.0) / 128.0
    return np.frombuffer(raw, dtype="<i2").astype(float) / 32768.0


def load_wav(path: Union[str, Path]) -> AudioClip:
    path = Path(path)
    try:
        with wave.open(str(path), "rb") as wav_file:
            n_channels = wav_file.getnchannels()
            frame_rate = wav_file.getframerate()
            sample_width = wav_file.getsampwidth()
            raw = wav_file.readframes(wav_file.getnframes())
    except (wave.Error, EOFError) as e:
        raise FormatError("riff_header", f"{path.name} is not a readable PCM WAV file ({e})")

    if n_channels != 1:
        raise FormatError(
            "channels", f"{path.name} has {n_channels} channels, only mono is supported"
        )
    if frame_rate != FSDD_SAMPLE_RATE:
        raise FormatError(
            "sample_rate", f"{path.name} is sampled at {frame_rate} Hz, expected {FSDD_SAMPLE_RATE}"
        )
    if sample_width not in SUPPORTED_SAMPLE_WIDTHS:
        raise FormatError(
            "sample_width", f"{path.name} uses {8 * sample_width}-bit samples, expected 8 or 16"
        )

    parsed = parse_fsdd_filename(path.name)
    label, speaker = (parsed[0], parsed[1]) if parsed else (None, None)
    return AudioClip(
        samples=np.clip(_decode_pcm(raw, sample_width), -1.0, 1.0),
        sample_rate=frame_rate,
        label=label,
        speaker=speaker,
        key=path.stem,
    )


def write_wav(path: Union[str, Path], samples: np.ndarray, sample_rate: int = FSDD_SAMPLE_RATE):
    pcm = (np.clip(samples, -1.0, 1.0) * 32767).astype("<i2")
    with wave.open(str(path), "wb") as wav_file:
        wav_file.setnchannels(1)
        wav_file.setsampwidth(2)
        wav_file.setframerate(sample_rate)
        wav_file.writeframes(pcm.tobytes())


def pad_or_truncate(clip: AudioClip, target: int = FSDD_CLIP_SAMPLES) -> AudioClip:
    samples = clip.samples
    if samples.size == target:
        return clip
    if samples.size > target:
        return clip.with_samples(samples[:target])
    return clip.with_samples(np.concatenate([samples, np.zeros(target - samples.size)]))


def add_gaussian_noise(clip: AudioClip, sigma: float, rng: np.random.Generator) -> AudioClip:
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return clip
    noisy = clip.samples + rng.normal(0.0, sigma, size=clip.samples.size)
    return clip.with_samples(np.clip(noisy, -1.0, 1.0))
