"""One-vs-rest linear SVMs trained by deterministic subgradient descent.

Each class gets a hinge-loss head against the rest, minimized by cycling
the training set in a fixed order with the 1/(lambda*t) step schedule
(lambda = 1/(C*n)). The bias rides along inside the regularized update,
which keeps the early huge steps of the schedule from destabilizing it.
Prediction is the argmax of the per-class decision values.
"""

import numpy as np

from ..errors import DegenerateTrainingError
from ..features import Dataset
from .base import ClassifierSpec, TrainedModel, check_training_data


class LinearSvmModel(TrainedModel):
    def __init__(self, spec, classes, dimension, weights, bias, vocab_checksum=None):
        super().__init__(spec, classes, dimension, vocab_checksum)
        self.weights = weights  # (n_classes, dimension)
        self.bias = bias  # (n_classes,)

    def decision_values(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights.T + self.bias

    def _predict_dense(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_values(X), axis=1)

    def params_payload(self) -> dict:
        return {"weights": self.weights, "bias": self.bias}


def fit_linear_svm(data: Dataset, spec: ClassifierSpec) -> LinearSvmModel:
    X, y, classes = check_training_data(data)
    if len(classes) < 2:
        raise DegenerateTrainingError(
            f"linear SVM needs at least two classes, got only {classes[0]}"
        )
    n, d = X.shape
    C = float(spec.params["C"])
    epochs = int(spec.params["epochs"])
    lam = 1.0 / (C * n)

    weights = np.zeros((len(classes), d), dtype=np.float64)
    bias = np.zeros(len(classes), dtype=np.float64)
    for k in range(len(classes)):
        sign = np.where(y == k, 1.0, -1.0)
        w = np.zeros(d, dtype=np.float64)
        b = 0.0
        t = 0
        for _ in range(epochs):
            for i in range(n):
                t += 1
                eta = 1.0 / (lam * t)
                violated = sign[i] * (X[i] @ w + b) < 1.0
                decay = 1.0 - 1.0 / t  # = 1 - eta * lam
                w *= decay
                b *= decay
                if violated:
                    w += (eta * sign[i]) * X[i]
                    b += eta * sign[i]
        weights[k] = w
        bias[k] = b
    return LinearSvmModel(spec, classes, d, weights, bias, data.vocab_checksum)
