"""Accuracy, macro-F1 and percentile summaries."""

from typing import Any, Dict, NamedTuple, Sequence

import numpy as np
from sklearn.metrics import confusion_matrix

from wisense_lab.channel.scene import ActivityClass
from wisense_lab.errors import EmptyInputError, ShapeMismatchError, UnknownLabelError

N_CLASSES = len(ActivityClass)


class Metrics(NamedTuple):
    accuracy: float
    macro_f1: float


class Summary(NamedTuple):
    median: float
    p25: float
    p75: float
    p5: float
    p95: float

    def to_dict(self) -> Dict[str, Any]:
        return self._asdict()


def _as_labels(values: Sequence[int], name: str) -> np.ndarray:
    array = np.asarray(values)
    if array.size and not np.issubdtype(array.dtype, np.integer):
        raise UnknownLabelError(f"{name} must be integer class indices")
    bad = array[(array < 0) | (array >= N_CLASSES)]
    if bad.size:
        raise UnknownLabelError(f"{name} contain unknown class(es) {sorted(set(bad.tolist()))}")
    return array


def compute_metrics(predictions: Sequence[int], labels: Sequence[int]) -> Metrics:
    """Accuracy and macro-F1 over the four classes.

    A class with neither true nor predicted instances is left out of the
    macro average; otherwise its F1 is 2tp / (2tp + fp + fn), 0 when tp = 0.
    """
    predictions = _as_labels(predictions, "predictions")
    labels = _as_labels(labels, "labels")
    if labels.size == 0:
        raise EmptyInputError("cannot score an empty prediction set")
    if predictions.shape != labels.shape:
        raise ShapeMismatchError(
            f"{predictions.size} predictions for {labels.size} labels"
        )

    cm = confusion_matrix(labels, predictions, labels=list(range(N_CLASSES)))
    tp = np.diag(cm).astype(float)
    fp = cm.sum(axis=0) - tp
    fn = cm.sum(axis=1) - tp
    present = (tp + fp + fn) > 0
    f1 = 2 * tp[present] / (2 * tp[present] + fp[present] + fn[present])

    accuracy = float(tp.sum() / labels.size)
    return Metrics(accuracy, float(f1.mean()))


def presence_accuracy(predictions: Sequence[int], labels: Sequence[int]) -> float:
    """Accuracy of the binary decision: empty room vs anyone present"""
    predictions = _as_labels(predictions, "predictions")
    labels = _as_labels(labels, "labels")
    if labels.size == 0:
        raise EmptyInputError("cannot score an empty prediction set")
    empty = ActivityClass.EMPTY.index
    return float(np.mean((predictions != empty) == (labels != empty)))


def summarize(values: Sequence[float]) -> Summary:
    """Median and the 25/75 and 5/95 percentiles, linear interpolation"""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyInputError("cannot summarize an empty list")
    p5, p25, median, p75, p95 = np.percentile(values, [5, 25, 50, 75, 95])
    return Summary(float(median), float(p25), float(p75), float(p5), float(p95))
