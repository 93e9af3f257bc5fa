import math

import numpy as np

from memrc.errors import InputShapeError, InvalidValueError
from memrc.models.reservoir import NUM_CODES, Mask

MAX_CODE = NUM_CODES - 1


def quantize4(x: float) -> int:
    """Maps [0, 1] onto the codes 0000..1111, rounding half away from zero."""
    if math.isnan(x):
        raise InvalidValueError("cannot quantize NaN")
    x = min(max(float(x), 0.0), 1.0)
    return int(math.floor(x * MAX_CODE + 0.5))


def quantize4_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.isnan(x).any():
        raise InvalidValueError("cannot quantize NaN")
    return np.floor(np.clip(x, 0.0, 1.0) * MAX_CODE + 0.5).astype(np.int64)


def masked_means(features: np.ndarray, mask: Mask) -> np.ndarray:
    features = np.asarray(features, dtype=float)
    if features.shape[-1] != mask.num_features:
        raise InputShapeError(
            f"feature length {features.shape[-1]} does not match mask width {mask.num_features}"
        )
    return np.clip(features @ mask.matrix.T / mask.matrix.sum(axis=1), 0.0, 1.0)


def encode_frame(features: np.ndarray, mask: Mask) -> np.ndarray:
    """Per-node 4-bit codes for one normalized feature vector."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 1:
        raise InputShapeError(f"expected a single feature vector, got shape {features.shape}")
    return quantize4_array(masked_means(features, mask))


def encode_frames(frames: np.ndarray, mask: Mask) -> np.ndarray:
    """frames x nodes codes."""
    frames = np.atleast_2d(np.asarray(frames, dtype=float))
    return quantize4_array(masked_means(frames, mask))
