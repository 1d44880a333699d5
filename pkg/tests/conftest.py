import numpy as np
import pytest

from logtriage.features import SparseVector
from logtriage.labels import FailureClass


def dense_to_sparse(dense) -> SparseVector:
    dense = np.asarray(dense, dtype=np.float64)
    idx = np.flatnonzero(dense)
    return SparseVector(idx.astype(np.int32), dense[idx], len(dense))


@pytest.fixture
def sv():
    return dense_to_sparse


@pytest.fixture
def two_blobs():
    """Two well-separated 6-D blobs, 30 points each; linearly separable."""
    rng = np.random.default_rng(7)
    a = rng.normal(0, 0.25, (30, 6)) + np.array([2, 0, 0, 1, 0, 0])
    b = rng.normal(0, 0.25, (30, 6)) + np.array([0, 2, 0, 0, 1, 0])
    X = np.vstack([a, b])
    labels = [FailureClass.ARTIFACTORY] * 30 + [FailureClass.CLUSTER] * 30
    return X, labels
