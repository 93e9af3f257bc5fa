from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from memrc.errors import EmptyInputError, InputShapeError
from memrc.models.tasks import NUM_DIGITS, MetricsReport
from memrc.readout.network import ReadoutNetwork, forward


def confusion_matrix(
    y_true: np.ndarray, y_pred: np.ndarray, num_classes: int = NUM_DIGITS
) -> np.ndarray:
    """Rows are true classes, columns predicted classes."""
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise InputShapeError(f"label vectors differ: {y_true.shape} vs {y_pred.shape}")
    confusion = np.zeros((num_classes, num_classes), dtype=int)
    np.add.at(confusion, (y_true, y_pred), 1)
    return confusion


def _ratios(hits: np.ndarray, totals: np.ndarray) -> List[Optional[float]]:
    return [float(h / t) if t else None for h, t in zip(hits, totals)]


def classification_metrics(
    y_true: np.ndarray, y_pred: np.ndarray, num_classes: int = NUM_DIGITS
) -> MetricsReport:
    confusion = confusion_matrix(y_true, y_pred, num_classes)
    total = int(confusion.sum())
    if total == 0:
        raise EmptyInputError("no predictions to score")
    correct = np.diag(confusion)
    accuracy = float(correct.sum() / total)
    missing = int((confusion.sum(axis=1) == 0).sum())
    if missing:
        logger.warning(f"{missing} class(es) absent from the evaluation labels")
    return MetricsReport(
        accuracy=accuracy,
        wer=1.0 - accuracy,
        confusion=confusion.tolist(),
        precision=_ratios(correct, confusion.sum(axis=0)),
        recall=_ratios(correct, confusion.sum(axis=1)),
        num_test=total,
    )


def evaluate(
    net: ReadoutNetwork, inputs: np.ndarray, labels: np.ndarray, num_classes: int = NUM_DIGITS
) -> MetricsReport:
    predicted = forward(net, np.atleast_2d(inputs)).argmax(axis=1)
    return classification_metrics(labels, predicted, num_classes)


def nrmse(y_true: np.ndarray, y_pred: np.ndarray) -> Tuple[float, bool]:
    """
    RMSE normalized by the standard deviation of the target. Returns (value, degenerate); a constant
    target makes the ratio undefined, in which case the raw RMSE is returned with degenerate=True.
    """
    y_true = np.asarray(y_true, dtype=float).ravel()
    y_pred = np.asarray(y_pred, dtype=float).ravel()
    if y_true.shape != y_pred.shape:
        raise InputShapeError(f"series differ: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise EmptyInputError("no samples to score")
    rmse = float(np.sqrt(np.mean((y_pred - y_true) ** 2)))
    std = float(y_true.std())
    if std == 0.0:
        logger.warning("Target series is constant, NRMSE is undefined")
        return rmse, True
    return rmse / std, False
