from typing import Sequence

import numpy as np
from loguru import logger
from pydantic.v1 import validator

from memrc.errors import FitError, InputShapeError
from memrc.models.model import ArrayModel

DEGENERATE_VALUE = 0.5


class Normalizer(ArrayModel):
    minimum: np.ndarray
    maximum: np.ndarray

    @validator("maximum")
    def bounds_must_be_ordered(cls, v, values):
        if "minimum" in values and (v < values["minimum"]).any():
            raise ValueError("maximum below minimum")
        return v


def fit_normalizer(training: Sequence[np.ndarray]) -> Normalizer:
    """Per-coefficient min/max over every frame of the training matrices."""
    matrices = [np.atleast_2d(np.asarray(m, dtype=float)) for m in training]
    matrices = [m for m in matrices if m.size]
    if not matrices:
        raise FitError("cannot fit a normalizer on an empty training set")
    stacked = np.concatenate(matrices, axis=0)
    normalizer = Normalizer(minimum=stacked.min(axis=0), maximum=stacked.max(axis=0))
    degenerate = int((normalizer.maximum == normalizer.minimum).sum())
    if degenerate:
        logger.warning(f"{degenerate} constant coefficient(s) will normalize to {DEGENERATE_VALUE}")
    return normalizer


def apply_normalizer(matrix: np.ndarray, normalizer: Normalizer) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape[-1] != normalizer.minimum.size:
        raise InputShapeError(
            f"matrix has {matrix.shape[-1]} columns, normalizer has {normalizer.minimum.size}"
        )
    span = normalizer.maximum - normalizer.minimum
    degenerate = span == 0
    scaled = (matrix - normalizer.minimum) / np.where(degenerate, 1.0, span)
    scaled = np.where(degenerate, DEGENERATE_VALUE, scaled)
    return np.clip(scaled, 0.0, 1.0)
