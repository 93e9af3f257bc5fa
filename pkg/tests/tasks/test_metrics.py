import numpy as np
import pytest

from memrc.errors import EmptyInputError, InputShapeError
from memrc.models.readout import OutputActivation
from memrc.readout.network import DenseLayer, ReadoutNetwork
from memrc.tasks.metrics import classification_metrics, confusion_matrix, evaluate, nrmse


def test_perfect_predictions():
    labels = np.arange(10).repeat(3)
    metrics = classification_metrics(labels, labels)
    assert metrics.accuracy == 1.0
    assert metrics.wer == 0.0
    assert np.array_equal(metrics.confusion, 3 * np.eye(10, dtype=int))
    assert metrics.precision == [1.0] * 10
    assert metrics.recall == [1.0] * 10


def test_confusion_rows_count_true_labels():
    y_true = np.array([0, 0, 1, 2, 2, 2])
    y_pred = np.array([0, 1, 1, 2, 0, 2])
    confusion = confusion_matrix(y_true, y_pred, 3)
    assert confusion.tolist() == [[1, 1, 0], [0, 1, 0], [1, 0, 2]]
    metrics = classification_metrics(y_true, y_pred, 3)
    assert metrics.accuracy == pytest.approx(4 / 6)
    assert metrics.wer == pytest.approx(1 - metrics.accuracy)
    assert metrics.recall == pytest.approx([0.5, 1.0, 2 / 3])
    assert metrics.precision == pytest.approx([0.5, 0.5, 1.0])


def test_absent_class_has_undefined_ratios():
    metrics = classification_metrics(np.array([0, 0]), np.array([0, 0]), 3)
    assert metrics.recall[1] is None
    assert metrics.precision[2] is None
    assert metrics.num_test == 2


def test_nothing_to_score():
    with pytest.raises(EmptyInputError):
        classification_metrics(np.array([], dtype=int), np.array([], dtype=int))


def test_mismatched_labels():
    with pytest.raises(InputShapeError):
        confusion_matrix(np.array([0, 1]), np.array([0]))


def test_evaluate_uses_argmax():
    weights = np.array([[1.0, 0.0], [0.0, 1.0]])
    net = ReadoutNetwork(
        layers=[DenseLayer(weights=weights, biases=np.zeros(2), gain=1.0)],
        output=OutputActivation.SOFTMAX,
    )
    inputs = np.array([[0.9, 0.1], [0.2, 0.8], [0.7, 0.3]])
    metrics = evaluate(net, inputs, np.array([0, 1, 1]), num_classes=2)
    assert metrics.accuracy == pytest.approx(2 / 3)


def test_nrmse():
    y = np.array([0.0, 1.0, 0.0, 1.0])
    assert nrmse(y, y) == (0.0, False)
    value, degenerate = nrmse(y, y + 0.25)
    assert value == pytest.approx(0.5)
    assert not degenerate


def test_nrmse_of_constant_target_is_flagged():
    value, degenerate = nrmse(np.full(5, 0.25), np.full(5, 0.5))
    assert degenerate
    assert value == pytest.approx(0.25)


def test_nrmse_input_checks():
    with pytest.raises(InputShapeError):
        nrmse(np.zeros(3), np.zeros(4))
    with pytest.raises(EmptyInputError):
        nrmse(np.zeros(0), np.zeros(0))


def test_uniform_random_predictor_scores_near_chance(rng):
    scores = []
    for _ in range(50):
        labels = rng.integers(0, 10, size=1000)
        guesses = rng.integers(0, 10, size=1000)
        scores.append(classification_metrics(labels, guesses).accuracy)
    scores = np.array(scores)
    assert np.mean(np.abs(scores - 0.1) <= 0.02) >= 0.85
    assert scores.mean() == pytest.approx(0.1, abs=0.005)
