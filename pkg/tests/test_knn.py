"""KNN against a brute-force scan and its documented tie-breaking."""

import numpy as np
import pytest

from logtriage.classifiers import ClassifierSpec, fit_knn
from logtriage.errors import ParameterError
from logtriage.features import Dataset
from logtriage.labels import ALL_CLASSES, FailureClass as F

from conftest import dense_to_sparse as sv


def dataset(X, labels):
    return Dataset(tuple(sv(row) for row in X), tuple(labels))


def brute_force_predict(train_X, train_labels, query, k):
    """Independent oracle: per-pair squared distances, stable order, same vote."""
    d2 = np.array([float(np.sum((np.asarray(query) - t) ** 2)) for t in train_X])
    order = np.argsort(d2, kind="stable")[:k]
    classes = sorted(set(train_labels))
    votes = {c: 0 for c in classes}
    for i in order:
        votes[train_labels[i]] += 1
    top = max(votes.values())
    tied = {c for c, v in votes.items() if v == top}
    if len(tied) == 1:
        return next(iter(tied))
    for i in order:
        if train_labels[i] in tied:
            return train_labels[i]
    raise AssertionError("unreachable")


class TestKnn:
    def test_zero_distance_k1(self):
        X = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
        labels = [F.CLUSTER, F.ARTIFACTORY, F.MICROSERVICE]
        model = fit_knn(dataset(X, labels), ClassifierSpec("knn", params={"k": 1}))
        for row, want in zip(X, labels):
            assert model.predict([sv(row)]) == [want]

    def test_hand_placed_five_points_k3(self):
        X = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [5.0, 5.0], [5.0, 6.0]]
        labels = [F.ARTIFACTORY, F.ARTIFACTORY, F.CLUSTER, F.CLUSTER, F.CLUSTER]
        model = fit_knn(dataset(X, labels), ClassifierSpec("knn", params={"k": 3}))
        for q in ([0.2, 0.2], [4.0, 5.0], [2.5, 2.5], [0.9, 0.9]):
            expected = brute_force_predict(np.array(X), labels, q, 3)
            assert model.predict([sv(q)]) == [expected]

    def test_k_equals_n_global_majority(self):
        X = [[0, 9], [1, 9], [2, 9], [50, 0], [60, 0]]
        labels = [F.CLUSTER] * 3 + [F.ARTIFACTORY] * 2
        model = fit_knn(dataset(X, labels), ClassifierSpec("knn", params={"k": 5}))
        for q in ([55, 0], [0, 9], [100, 100]):
            assert model.predict([sv(q)]) == [F.CLUSTER]

    def test_k_larger_than_n_rejected(self):
        data = dataset([[1.0], [2.0]], [F.CLUSTER, F.ARTIFACTORY])
        with pytest.raises(ParameterError):
            fit_knn(data, ClassifierSpec("knn", params={"k": 3}))

    def test_vote_tie_falls_to_nearest_tied_class(self):
        # k=2: nearest is CLUSTER at d^2=1, then ARTIFACTORY at d^2=4
        X = [[1.0, 0.0], [2.0, 0.0], [9.0, 9.0]]
        labels = [F.CLUSTER, F.ARTIFACTORY, F.ARTIFACTORY]
        model = fit_knn(dataset(X, labels), ClassifierSpec("knn", params={"k": 2}))
        assert model.predict([sv([0.0, 0.0])]) == [F.CLUSTER]

    def test_distance_tie_falls_to_lower_index(self):
        # both training points coincide; index 0 wins the k=1 neighbor slot
        X = [[1.0, 1.0], [1.0, 1.0]]
        labels = [F.MICROSERVICE, F.ARTIFACTORY]
        model = fit_knn(dataset(X, labels), ClassifierSpec("knn", params={"k": 1}))
        assert model.predict([sv([1.0, 1.0])]) == [F.MICROSERVICE]

    def test_random_queries_match_brute_force(self):
        rng = np.random.default_rng(42)
        n, d = 80, 12
        X = np.round(rng.random((n, d)) * (rng.random((n, d)) < 0.4), 3)
        labels = [ALL_CLASSES[i] for i in rng.integers(0, 5, n)]
        model = fit_knn(dataset(X, labels), ClassifierSpec("knn", params={"k": 5}))
        queries = np.round(rng.random((40, d)) * (rng.random((40, d)) < 0.4), 3)
        got = model.predict([sv(q) for q in queries])
        expected = [brute_force_predict(X, labels, q, 5) for q in queries]
        assert got == expected
