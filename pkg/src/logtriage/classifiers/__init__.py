"""Five classification algorithms behind one fit/predict contract."""

from ..features import Dataset
from .base import (
    ALGORITHM_NAMES,
    DEFAULT_PARAMS,
    DISPLAY_NAMES,
    ClassifierSpec,
    TrainedModel,
)
from .boosting import GradientBoostingModel, fit_gradient_boosting
from .forest import RandomForestModel, fit_random_forest
from .knn import KnnModel, fit_knn
from .mlp import MlpModel, MlpNetwork, fit_mlp
from .svm import LinearSvmModel, fit_linear_svm

__all__ = [
    "ALGORITHM_NAMES",
    "DEFAULT_PARAMS",
    "DISPLAY_NAMES",
    "ClassifierSpec",
    "TrainedModel",
    "fit_model",
    "fit_linear_svm",
    "fit_knn",
    "fit_random_forest",
    "fit_gradient_boosting",
    "fit_mlp",
    "LinearSvmModel",
    "KnnModel",
    "RandomForestModel",
    "GradientBoostingModel",
    "MlpModel",
    "MlpNetwork",
]

_FITTERS = {
    "linear_svm": fit_linear_svm,
    "knn": fit_knn,
    "random_forest": fit_random_forest,
    "gradient_boosting": fit_gradient_boosting,
    "mlp": fit_mlp,
}


def fit_model(data: Dataset, spec: ClassifierSpec) -> TrainedModel:
    """Dispatch fitting to the algorithm named by the spec."""
    return _FITTERS[spec.algorithm](data, spec)
