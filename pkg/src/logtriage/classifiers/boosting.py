"""Gradient boosting on the multinomial deviance.

Raw per-class scores start at the log class priors. Every stage fits one
depth-limited least-squares tree per class to that class's softmax
residuals (one-hot minus predicted probability) and adds the scaled tree
output to the raw scores. Training deviance (mean categorical
cross-entropy) is recorded before boosting and after every stage, so the
descent is observable. The procedure draws no randomness.
"""

import numpy as np

from ..errors import DegenerateTrainingError
from ..features import Dataset
from .base import ClassifierSpec, TrainedModel, check_training_data
from .tree import TreeNode, grow_regression_tree, predict_tree


def _softmax(raw: np.ndarray) -> np.ndarray:
    shifted = raw - raw.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _deviance(raw: np.ndarray, y: np.ndarray) -> float:
    shifted = raw - raw.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    return float(np.mean(log_norm - shifted[np.arange(len(y)), y]))


class GradientBoostingModel(TrainedModel):
    def __init__(self, spec, classes, dimension, base_scores, stages,
                 training_deviance, vocab_checksum=None):
        super().__init__(spec, classes, dimension, vocab_checksum)
        self.base_scores = base_scores  # (n_classes,) log priors
        self.stages = stages  # list of per-class tree lists
        self.training_deviance = training_deviance  # before boosting + per stage

    def raw_scores(self, X: np.ndarray) -> np.ndarray:
        lr = float(self.spec.params["learning_rate"])
        raw = np.tile(self.base_scores, (X.shape[0], 1))
        for stage in self.stages:
            for k, root in enumerate(stage):
                raw[:, k] += lr * predict_tree(root, X)
        return raw

    def _predict_dense(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.raw_scores(X), axis=1)

    def params_payload(self) -> dict:
        return {
            "base_scores": self.base_scores,
            "stages": [[root.to_dict() for root in stage] for stage in self.stages],
            "training_deviance": list(self.training_deviance),
        }


def fit_gradient_boosting(data: Dataset, spec: ClassifierSpec) -> GradientBoostingModel:
    X, y, classes = check_training_data(data)
    if len(classes) < 2:
        raise DegenerateTrainingError(
            f"gradient boosting needs at least two classes, got only {classes[0]}"
        )
    n, d = X.shape
    n_classes = len(classes)
    n_stages = int(spec.params["stages"])
    lr = float(spec.params["learning_rate"])
    depth = int(spec.params["depth"])

    priors = np.bincount(y, minlength=n_classes) / n
    base_scores = np.log(priors)
    onehot = np.zeros((n, n_classes), dtype=np.float64)
    onehot[np.arange(n), y] = 1.0

    raw = np.tile(base_scores, (n, 1))
    deviance = [_deviance(raw, y)]
    stages: list[list[TreeNode]] = []
    for _ in range(n_stages):
        probs = _softmax(raw)
        stage: list[TreeNode] = []
        for k in range(n_classes):
            residual = onehot[:, k] - probs[:, k]
            root = grow_regression_tree(X, residual, max_depth=depth)
            raw[:, k] += lr * predict_tree(root, X)
            stage.append(root)
        stages.append(stage)
        deviance.append(_deviance(raw, y))
    return GradientBoostingModel(
        spec, classes, d, base_scores, stages, deviance, data.vocab_checksum
    )
