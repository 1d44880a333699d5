"""Random forest: bagged Gini trees with per-node feature subsets.

Tree i draws everything it needs (bootstrap indices, then per-node feature
candidates) from its own generator seeded ``spec.seed XOR i``, so forests
are reproducible and trees are independent of build order. Prediction is a
plurality vote over trees; vote ties resolve to the lexicographically first
class via the model's sorted class order.
"""

import math

import numpy as np

from ..features import Dataset
from .base import ClassifierSpec, TrainedModel, check_training_data
from .tree import TreeNode, grow_classification_tree, predict_tree


class RandomForestModel(TrainedModel):
    def __init__(self, spec, classes, dimension, roots, vocab_checksum=None):
        super().__init__(spec, classes, dimension, vocab_checksum)
        self.roots = roots

    def _predict_dense(self, X: np.ndarray) -> np.ndarray:
        counts = np.zeros((X.shape[0], len(self.classes)), dtype=np.int64)
        rows = np.arange(X.shape[0])
        for root in self.roots:
            votes = predict_tree(root, X).astype(np.int64)
            counts[rows, votes] += 1
        return np.argmax(counts, axis=1)

    def params_payload(self) -> dict:
        return {"trees": [root.to_dict() for root in self.roots]}


def fit_random_forest(data: Dataset, spec: ClassifierSpec) -> RandomForestModel:
    X, y, classes = check_training_data(data)
    n, d = X.shape
    n_trees = int(spec.params["trees"])
    bootstrap = bool(spec.params["bootstrap"])
    max_features = math.ceil(math.sqrt(d))

    roots: list[TreeNode] = []
    for i in range(n_trees):
        rng = np.random.default_rng(spec.seed ^ i)
        indices = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        roots.append(
            grow_classification_tree(
                X, y, len(classes), rng,
                max_features=max_features, sample_indices=indices,
            )
        )
    return RandomForestModel(spec, classes, d, roots, data.vocab_checksum)
