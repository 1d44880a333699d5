"""Linear one-vs-rest SVM behavior on constructed geometries."""

import numpy as np
import pytest

from logtriage.classifiers import ClassifierSpec, fit_linear_svm
from logtriage.errors import DegenerateTrainingError
from logtriage.features import Dataset
from logtriage.labels import FailureClass as F

from conftest import dense_to_sparse as sv


def dataset(X, labels):
    return Dataset(tuple(sv(row) for row in X), tuple(labels))


class TestLinearSvm:
    def test_one_dimensional_separable(self):
        data = dataset([[-1.0], [1.0]], [F.ARTIFACTORY, F.CLUSTER])
        model = fit_linear_svm(data, ClassifierSpec("linear_svm"))
        assert model.predict([sv([-0.5])]) == [F.ARTIFACTORY]
        assert model.predict([sv([0.5])]) == [F.CLUSTER]

    def test_separable_blobs_reach_full_training_accuracy(self, two_blobs):
        X, labels = two_blobs
        data = dataset(X, labels)
        model = fit_linear_svm(data, ClassifierSpec("linear_svm"))
        preds = model.predict(data.vectors)
        assert np.mean([p == t for p, t in zip(preds, labels)]) == 1.0

    def test_xor_is_not_linearly_separable(self):
        X = [[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]]
        labels = [F.ARTIFACTORY, F.ARTIFACTORY, F.CLUSTER, F.CLUSTER]
        data = dataset(X, labels)
        model = fit_linear_svm(data, ClassifierSpec("linear_svm", params={"epochs": 200}))
        preds = model.predict(data.vectors)
        assert np.mean([p == t for p, t in zip(preds, labels)]) <= 0.75

    def test_single_class_is_degenerate(self):
        data = dataset([[1.0], [2.0]], [F.CLUSTER, F.CLUSTER])
        with pytest.raises(DegenerateTrainingError):
            fit_linear_svm(data, ClassifierSpec("linear_svm"))

    def test_deterministic_weights(self, two_blobs):
        X, labels = two_blobs
        data = dataset(X, labels)
        a = fit_linear_svm(data, ClassifierSpec("linear_svm"))
        b = fit_linear_svm(data, ClassifierSpec("linear_svm"))
        assert np.array_equal(a.weights, b.weights)
        assert np.array_equal(a.bias, b.bias)

    def test_multiclass_decision_shape(self):
        X = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        labels = [F.ARTIFACTORY, F.CLUSTER, F.MICROSERVICE]
        model = fit_linear_svm(dataset(X, labels), ClassifierSpec("linear_svm"))
        values = model.decision_values(np.eye(3))
        assert values.shape == (3, 3)
        assert model.predict([sv(r) for r in np.eye(3)]) == labels
