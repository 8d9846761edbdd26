"""Pooled-feature linear softmax classifier.

Features are standardised with training statistics, mapped through an
affine transform to four logits and normalised with a softmax. Training is
full-batch gradient descent on mean cross-entropy plus L2 weight decay.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import log_softmax, softmax

from wisense_lab.channel.scene import ActivityClass
from wisense_lab.classifier.features import (
    ClassifierInput,
    feature_matrix,
    featurize,
    label_vector,
)
from wisense_lab.errors import (
    ConfigurationError,
    DegenerateDatasetError,
    ShapeMismatchError,
    UnknownLabelError,
)

logger = logging.getLogger(__name__)

ARCHITECTURE = "log1p-meanstd-linear-softmax"
N_CLASSES = len(ActivityClass)


@dataclass
class TrainingHyper:
    learning_rate: float = 0.05
    epochs: int = 500
    weight_decay: float = 1e-3
    init_scale: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ConfigurationError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be >= 1, got {self.epochs}")
        if self.weight_decay < 0 or self.init_scale < 0:
            raise ConfigurationError("weight_decay and init_scale must be non-negative")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrainingHyper":
        return cls(**data)


@dataclass(eq=False)
class Model:
    """Trained parameters plus the metadata needed to score new inputs"""
    weights: np.ndarray  # (n_classes, n_features)
    bias: np.ndarray  # (n_classes,)
    feature_mean: np.ndarray
    feature_scale: np.ndarray
    hyper: TrainingHyper = field(default_factory=TrainingHyper)
    loss_trace: List[float] = field(default_factory=list)
    class_names: List[str] = field(default_factory=ActivityClass.names)
    fft_len: Optional[int] = None
    n_vectors: Optional[int] = None
    best_epoch: Optional[int] = None

    @classmethod
    def initial(
        cls,
        n_features: int,
        hyper: Optional[TrainingHyper] = None,
        feature_mean: Optional[np.ndarray] = None,
        feature_scale: Optional[np.ndarray] = None,
        n_classes: int = N_CLASSES,
    ) -> "Model":
        """Untrained model with small Gaussian weights drawn from ``hyper.seed``"""
        hyper = hyper or TrainingHyper()
        rng = np.random.default_rng(hyper.seed)
        return cls(
            weights=rng.normal(0.0, 1.0, (n_classes, n_features)) * hyper.init_scale,
            bias=np.zeros(n_classes),
            feature_mean=np.zeros(n_features) if feature_mean is None else feature_mean,
            feature_scale=np.ones(n_features) if feature_scale is None else feature_scale,
            hyper=hyper,
        )

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    @property
    def n_parameters(self) -> int:
        return self.weights.size + self.bias.size

    def standardize(self, features: np.ndarray) -> np.ndarray:
        return (features - self.feature_mean) / self.feature_scale

    def logits(self, features: np.ndarray) -> np.ndarray:
        features = np.atleast_2d(features)
        if features.shape[1] != self.n_features:
            raise ShapeMismatchError(
                f"model expects {self.n_features} features, got {features.shape[1]}"
            )
        return self.standardize(features) @ self.weights.T + self.bias

    def probabilities(self, features: np.ndarray) -> np.ndarray:
        return softmax(self.logits(features), axis=1)


def loss_and_gradients(
    model: Model,
    features: np.ndarray,
    labels: np.ndarray,
    weight_decay: float = 0.0,
    weights: Optional[np.ndarray] = None,
    bias: Optional[np.ndarray] = None,
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy (+ L2 on weights) and its gradients w.r.t. weights and bias.

    ``weights``/``bias`` override the model's parameters when given.
    """
    W = model.weights if weights is None else weights
    b = model.bias if bias is None else bias
    x = model.standardize(np.atleast_2d(features))
    n = x.shape[0]

    logits = x @ W.T + b
    log_p = log_softmax(logits, axis=1)
    loss = -float(np.mean(log_p[np.arange(n), labels]))
    loss += 0.5 * weight_decay * float(np.sum(W * W))

    delta = np.exp(log_p)
    delta[np.arange(n), labels] -= 1.0
    delta /= n
    grad_w = delta.T @ x + weight_decay * W
    grad_b = delta.sum(axis=0)
    return loss, grad_w, grad_b


def numerical_gradients(
    model: Model,
    features: np.ndarray,
    labels: np.ndarray,
    epsilon: float = 1e-5,
    weight_decay: float = 0.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """Central finite differences of the same loss, parameter by parameter"""
    def loss_at(W, b):
        return loss_and_gradients(model, features, labels, weight_decay, W, b)[0]

    grad_w = np.zeros_like(model.weights)
    for idx in np.ndindex(model.weights.shape):
        plus, minus = model.weights.copy(), model.weights.copy()
        plus[idx] += epsilon
        minus[idx] -= epsilon
        grad_w[idx] = (loss_at(plus, model.bias) - loss_at(minus, model.bias)) / (2 * epsilon)

    grad_b = np.zeros_like(model.bias)
    for i in range(model.bias.size):
        plus, minus = model.bias.copy(), model.bias.copy()
        plus[i] += epsilon
        minus[i] -= epsilon
        grad_b[i] = (loss_at(model.weights, plus) - loss_at(model.weights, minus)) / (2 * epsilon)
    return grad_w, grad_b


def _check_labels(labels: np.ndarray, n_classes: int):
    unknown = set(np.unique(labels).tolist()) - set(range(n_classes))
    if unknown:
        raise UnknownLabelError(f"labels {sorted(unknown)} outside [0, {n_classes})")
    missing = set(range(n_classes)) - set(labels.tolist())
    if missing:
        raise DegenerateDatasetError(f"training data has no example of class(es) {sorted(missing)}")


def fit_softmax(
    features: np.ndarray,
    labels: np.ndarray,
    hyper: Optional[TrainingHyper] = None,
    validation: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    n_classes: int = N_CLASSES,
) -> Model:
    """Full-batch gradient descent on a raw feature matrix.

    With ``validation`` the parameters of the epoch with the lowest
    validation loss are kept (earliest on ties); otherwise the final ones.
    """
    hyper = hyper or TrainingHyper()
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if features.ndim != 2 or features.shape[0] != labels.size:
        raise ShapeMismatchError(
            f"features {features.shape} do not match {labels.size} labels"
        )
    if not np.all(np.isfinite(features)):
        raise ShapeMismatchError("features must be finite")
    _check_labels(labels, n_classes)

    scale = features.std(axis=0)
    scale[scale == 0] = 1.0
    model = Model.initial(features.shape[1], hyper, features.mean(axis=0), scale, n_classes)

    best = None
    for epoch in range(hyper.epochs):
        loss, grad_w, grad_b = loss_and_gradients(model, features, labels, hyper.weight_decay)
        model.loss_trace.append(loss)
        if validation is not None:
            val_loss = loss_and_gradients(model, validation[0], validation[1])[0]
            if best is None or val_loss < best[0]:
                best = (val_loss, epoch, model.weights.copy(), model.bias.copy())
        model.weights = model.weights - hyper.learning_rate * grad_w
        model.bias = model.bias - hyper.learning_rate * grad_b
        if epoch % 100 == 0:
            logger.debug("epoch %d: loss=%.6f", epoch, loss)

    if best is not None:
        _, model.best_epoch, model.weights, model.bias = best
    return model


def train(
    dataset: Sequence[ClassifierInput],
    hyper: Optional[TrainingHyper] = None,
    validation: Optional[Sequence[ClassifierInput]] = None,
) -> Model:
    """Featurize labelled inputs and fit the softmax model"""
    if not dataset:
        raise DegenerateDatasetError("empty training set")
    shape = dataset[0].vectors.shape
    if any(s.vectors.shape != shape for s in dataset):
        raise ShapeMismatchError("training inputs must share one (N, fft_len) shape")

    val = None
    if validation:
        val = (feature_matrix(validation), label_vector(validation))
    model = fit_softmax(feature_matrix(dataset), label_vector(dataset), hyper, val)
    model.n_vectors, model.fft_len = shape
    return model


def _check_input(model: Model, sample: ClassifierInput):
    expected = (model.n_vectors, model.fft_len)
    if model.fft_len is not None and sample.vectors.shape != expected:
        raise ShapeMismatchError(f"input shape {sample.vectors.shape} does not match {expected}")


def predict(model: Model, sample: ClassifierInput) -> Tuple[int, np.ndarray]:
    """Class index (ties to the lowest index) and the class probabilities"""
    _check_input(model, sample)
    probabilities = model.probabilities(featurize(sample))[0]
    return int(np.argmax(probabilities)), probabilities


def predict_batch(model: Model, samples: Sequence[ClassifierInput]) -> np.ndarray:
    for sample in samples:
        _check_input(model, sample)
    return np.argmax(model.probabilities(feature_matrix(samples)), axis=1)


def gradient_check(
    model: Model,
    samples: Union[ClassifierInput, Sequence[ClassifierInput]],
    epsilon: float = 1e-5,
) -> float:
    """Largest |analytic - numerical| / max(|analytic| + |numerical|, 1e-5) over all parameters"""
    if not 1e-7 <= epsilon <= 1e-3:
        raise ConfigurationError(f"epsilon must lie in [1e-7, 1e-3], got {epsilon}")
    if isinstance(samples, ClassifierInput):
        samples = [samples]
    features = feature_matrix(samples)
    labels = label_vector(samples)

    _, grad_w, grad_b = loss_and_gradients(model, features, labels)
    num_w, num_b = numerical_gradients(model, features, labels, epsilon)
    analytic = np.concatenate([grad_w.ravel(), grad_b])
    numerical = np.concatenate([num_w.ravel(), num_b])
    denominator = np.maximum(np.abs(analytic) + np.abs(numerical), 1e-5)
    return float(np.max(np.abs(analytic - numerical) / denominator))
