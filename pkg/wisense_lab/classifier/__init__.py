# Activity classifier module
from .features import ClassifierInput, feature_matrix, featurize, label_vector
from .model import (
    Model,
    TrainingHyper,
    fit_softmax,
    gradient_check,
    loss_and_gradients,
    numerical_gradients,
    predict,
    predict_batch,
    train,
)
from .serialization import load_model, save_model

__all__ = [
    "ClassifierInput",
    "feature_matrix",
    "featurize",
    "label_vector",
    "Model",
    "TrainingHyper",
    "fit_softmax",
    "gradient_check",
    "loss_and_gradients",
    "numerical_gradients",
    "predict",
    "predict_batch",
    "train",
    "load_model",
    "save_model",
]
