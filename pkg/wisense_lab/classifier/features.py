"""Classifier inputs and pooled Doppler features."""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from wisense_lab.errors import ConfigurationError, ShapeMismatchError


@dataclass(frozen=True, eq=False)
class ClassifierInput:
    """A stack of N Doppler vectors (N, fft_len) with an optional class index.

    ``scale`` divides the vectors before log compression so captures with
    different absolute power land on a comparable range.
    """
    vectors: np.ndarray
    label: Optional[int] = None
    scale: float = 1.0

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=float)
        if vectors.ndim != 2:
            raise ShapeMismatchError(f"classifier input must be 2-D, got shape {vectors.shape}")
        if not np.all(np.isfinite(vectors)) or np.any(vectors < 0):
            raise ShapeMismatchError("Doppler vectors must be finite and non-negative")
        if not self.scale > 0:
            raise ConfigurationError(f"normalization scale must be positive, got {self.scale}")
        object.__setattr__(self, "vectors", vectors)

    @property
    def n_vectors(self) -> int:
        return self.vectors.shape[0]

    @property
    def fft_len(self) -> int:
        return self.vectors.shape[1]


def featurize(sample: ClassifierInput) -> np.ndarray:
    """log(1 + x), then per-bin mean and std over the N vectors -> length 2 * fft_len"""
    compressed = np.log1p(sample.vectors / sample.scale)
    return np.concatenate([compressed.mean(axis=0), compressed.std(axis=0)])


def feature_matrix(samples: Sequence[ClassifierInput]) -> np.ndarray:
    if not samples:
        return np.zeros((0, 0))
    return np.stack([featurize(s) for s in samples])


def label_vector(samples: Sequence[ClassifierInput]) -> np.ndarray:
    labels: List[int] = []
    for s in samples:
        if s.label is None:
            raise ShapeMismatchError("training samples need a label")
        labels.append(s.label)
    return np.asarray(labels, dtype=int)
