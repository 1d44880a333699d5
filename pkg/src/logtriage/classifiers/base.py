"""Shared fit/predict contract for the five algorithms.

A ClassifierSpec names the algorithm, its hyperparameters (defaults below
mirror the comparison's standard settings), and a seed; fitting returns an
immutable TrainedModel whose predict is a pure function of (model, input).
Class order inside a model is always the alphabetical failure-class order,
so every argmax tie resolves to the lexicographically first class.
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ParameterError, ShapeError, ValidationError
from ..features import Dataset, SparseVector
from ..labels import FailureClass

DEFAULT_PARAMS: dict[str, dict] = {
    "linear_svm": {"C": 1.0, "epochs": 50},
    "knn": {"k": 5},
    "random_forest": {"trees": 1000, "bootstrap": True},
    "gradient_boosting": {"stages": 100, "learning_rate": 0.1, "depth": 3},
    "mlp": {
        "hidden": (512, 256),
        "dropout": 0.5,
        "learning_rate": 0.001,
        "epochs": 30,
        "batch_size": 32,
    },
}

ALGORITHM_NAMES = tuple(sorted(DEFAULT_PARAMS))

DISPLAY_NAMES = {
    "linear_svm": "SVM",
    "knn": "KNN",
    "random_forest": "Random Forest",
    "gradient_boosting": "Gradient Boosting",
    "mlp": "MLP",
}


def _check_positive(params: dict, keys: Sequence[str]) -> None:
    for key in keys:
        value = params[key]
        if not value > 0:
            raise ParameterError(f"{key} must be strictly positive, got {value!r}")


@dataclass(frozen=True)
class ClassifierSpec:
    algorithm: str
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in DEFAULT_PARAMS:
            known = ", ".join(ALGORITHM_NAMES)
            raise ValidationError(f"unknown algorithm {self.algorithm!r}; expected one of: {known}")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        merged = dict(DEFAULT_PARAMS[self.algorithm])
        unknown = set(self.params) - set(merged)
        if unknown:
            raise ParameterError(
                f"unknown {self.algorithm} parameters: {', '.join(sorted(unknown))}"
            )
        merged.update(self.params)
        self._validate(merged)
        object.__setattr__(self, "params", merged)

    def _validate(self, p: dict) -> None:
        algo = self.algorithm
        if algo == "linear_svm":
            _check_positive(p, ("C", "epochs"))
        elif algo == "knn":
            _check_positive(p, ("k",))
        elif algo == "random_forest":
            _check_positive(p, ("trees",))
        elif algo == "gradient_boosting":
            _check_positive(p, ("learning_rate", "depth"))
            if p["stages"] < 0:
                raise ParameterError(f"stages must be >= 0, got {p['stages']}")
        elif algo == "mlp":
            hidden = tuple(p["hidden"])
            if len(hidden) != 2 or any(h < 1 for h in hidden):
                raise ParameterError(f"hidden must be two positive layer sizes, got {p['hidden']!r}")
            p["hidden"] = hidden
            _check_positive(p, ("learning_rate", "epochs", "batch_size"))
            if not 0.0 <= p["dropout"] < 1.0:
                raise ParameterError(f"dropout must lie in [0, 1), got {p['dropout']}")

    def to_dict(self) -> dict:
        params = {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.params.items()}
        return {"algorithm": self.algorithm, "seed": self.seed, "params": params}

    @classmethod
    def from_dict(cls, data: dict) -> "ClassifierSpec":
        params = dict(data.get("params", {}))
        if "hidden" in params:
            params["hidden"] = tuple(params["hidden"])
        return cls(algorithm=data["algorithm"], seed=data.get("seed", 0), params=params)


def stack_dense(vectors: Sequence[SparseVector], dimension: int) -> np.ndarray:
    """Densify sparse vectors into one (n, dimension) float64 matrix."""
    X = np.zeros((len(vectors), dimension), dtype=np.float64)
    for row, vec in enumerate(vectors):
        if vec.dimension != dimension:
            raise ShapeError(
                f"vector dimension {vec.dimension} does not match expected {dimension}"
            )
        X[row, vec.indices] = vec.values
    return X


def check_training_data(data: Dataset) -> tuple[np.ndarray, np.ndarray, tuple[FailureClass, ...]]:
    """Validate a dataset and return (X, class-index labels, class order)."""
    if len(data) == 0:
        raise ValidationError("cannot fit on an empty dataset")
    classes = tuple(sorted(set(data.labels)))
    X = stack_dense(data.vectors, data.dimension)
    class_index = {c: i for i, c in enumerate(classes)}
    y = np.array([class_index[label] for label in data.labels], dtype=np.int64)
    return X, y, classes


class TrainedModel:
    """Immutable fitted model; subclasses implement the dense prediction."""

    def __init__(self, spec: ClassifierSpec, classes: tuple[FailureClass, ...],
                 dimension: int, vocab_checksum: str | None = None):
        self.spec = spec
        self.classes = classes
        self.dimension = dimension
        self.vocab_checksum = vocab_checksum

    @property
    def algorithm(self) -> str:
        return self.spec.algorithm

    def predict(self, vectors: Sequence[SparseVector]) -> list[FailureClass]:
        """Classify vectors; empty (all-OOV) vectors route through as zeros."""
        if len(vectors) == 0:
            return []
        X = stack_dense(vectors, self.dimension)
        return [self.classes[i] for i in self._predict_dense(X)]

    def _predict_dense(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def params_payload(self) -> dict:
        """Learned parameters in a JSON-serializable form (persistence)."""
        raise NotImplementedError
