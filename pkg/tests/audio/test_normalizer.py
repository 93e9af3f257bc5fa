import numpy as np
import pytest

from memrc.audio.normalizer import DEGENERATE_VALUE, apply_normalizer, fit_normalizer
from memrc.errors import FitError, InputShapeError


def test_fit_spans_every_training_frame():
    normalizer = fit_normalizer([np.array([[0.0, 5.0], [2.0, 1.0]]), np.array([[-1.0, 3.0]])])
    assert normalizer.minimum.tolist() == [-1.0, 1.0]
    assert normalizer.maximum.tolist() == [2.0, 5.0]


def test_apply_scales_into_unit_interval():
    normalizer = fit_normalizer([np.array([[0.0, 10.0], [4.0, 20.0]])])
    scaled = apply_normalizer(np.array([[1.0, 15.0], [-3.0, 40.0]]), normalizer)
    assert scaled.tolist() == [[0.25, 0.5], [0.0, 1.0]]


def test_training_data_lands_in_unit_interval(rng):
    training = [rng.normal(size=(20, 13)) for _ in range(5)]
    normalizer = fit_normalizer(training)
    for matrix in training:
        scaled = apply_normalizer(matrix, normalizer)
        assert scaled.min() >= 0.0
        assert scaled.max() <= 1.0


def test_constant_coefficient_maps_to_midpoint():
    normalizer = fit_normalizer([np.array([[1.0, 7.0], [2.0, 7.0]])])
    scaled = apply_normalizer(np.array([[1.5, 7.0], [1.5, 100.0]]), normalizer)
    assert scaled[:, 1].tolist() == [DEGENERATE_VALUE, DEGENERATE_VALUE]


def test_empty_training_set():
    with pytest.raises(FitError):
        fit_normalizer([])
    with pytest.raises(FitError):
        fit_normalizer([np.zeros((0, 13))])


def test_column_mismatch():
    normalizer = fit_normalizer([np.zeros((2, 13))])
    with pytest.raises(InputShapeError):
        apply_normalizer(np.zeros((2, 12)), normalizer)
