"""K-nearest-neighbors with fully specified tie-breaking.

The model is the training matrix itself. A query's k nearest points by
Euclidean distance vote; a tied vote falls to the class of the nearest
neighbor among the tied classes, and equal distances rank by lower
training index (the neighbor ordering is a stable sort on distance).
"""

import numpy as np

from ..errors import ParameterError
from ..features import Dataset
from .base import ClassifierSpec, TrainedModel, check_training_data


class KnnModel(TrainedModel):
    def __init__(self, spec, classes, dimension, train_matrix, train_labels, vocab_checksum=None):
        super().__init__(spec, classes, dimension, vocab_checksum)
        self.train_matrix = train_matrix  # (n, dimension)
        self.train_labels = train_labels  # (n,) class indices
        self._train_sq = np.sum(train_matrix**2, axis=1)

    def _predict_dense(self, X: np.ndarray) -> np.ndarray:
        k = int(self.spec.params["k"])
        d2 = self._train_sq[None, :] - 2.0 * (X @ self.train_matrix.T) + np.sum(X**2, axis=1)[:, None]
        out = np.empty(X.shape[0], dtype=np.int64)
        n_classes = len(self.classes)
        for row in range(X.shape[0]):
            order = np.argsort(d2[row], kind="stable")[:k]
            votes = np.bincount(self.train_labels[order], minlength=n_classes)
            top = votes.max()
            tied = np.flatnonzero(votes == top)
            if len(tied) == 1:
                out[row] = tied[0]
                continue
            for neighbor in order:  # nearest first; distance ties already index-ordered
                if votes[self.train_labels[neighbor]] == top:
                    out[row] = self.train_labels[neighbor]
                    break
        return out

    def params_payload(self) -> dict:
        return {"train_matrix": self.train_matrix, "train_labels": self.train_labels}


def fit_knn(data: Dataset, spec: ClassifierSpec) -> KnnModel:
    X, y, classes = check_training_data(data)
    k = int(spec.params["k"])
    if k > len(data):
        raise ParameterError(f"k={k} exceeds the {len(data)} training instances")
    return KnnModel(spec, classes, X.shape[1], X, y, data.vocab_checksum)
