"""Numpy implementations of the tree split-search kernels.

These are the import-time fallback for the compiled extension. Both
backends follow the same contract, bit for bit:

- features are scanned in row order; per feature, samples are stably
  argsorted by value, so equal values keep their incoming order;
- a threshold is placed only between strictly increasing neighbor values,
  at their midpoint, clamped down if rounding lands on the upper value;
- classification maximizes sum(count_k^2)/n_left + sum(count_k^2)/n_right
  (integer squared counts; equivalent to minimizing weighted Gini) and
  regression maximizes sum_left^2/n_left + sum_right^2/n_right (equivalent
  to minimizing total squared error), with left sums accumulated
  sequentially in sorted order;
- strictly-greater comparison picks the winner, so the first best
  (feature, threshold) in scan order is returned.

Given identical inputs, the compiled backend returns identical floats, so a
model trained with one backend predicts identically under the other.

Returns (feature_row, threshold, metric); feature_row is -1 when no feature
admits a split.
"""

import numpy as np

NO_SPLIT = (-1, 0.0, -np.inf)


def best_classification_split(values: np.ndarray, labels: np.ndarray, n_classes: int):
    """Best Gini split over candidate feature rows.

    values: (n_features, n_samples) float64; labels: (n_samples,) int64.
    """
    n = values.shape[1]
    best_feat, best_thr, best_metric = NO_SPLIT
    positions = np.arange(n)
    n_left = np.arange(1, n, dtype=np.int64)
    n_right = n - n_left
    for f in range(values.shape[0]):
        row = values[f]
        order = np.argsort(row, kind="stable")
        v = row[order]
        valid = v[1:] > v[:-1]
        if not valid.any():
            continue
        onehot = np.zeros((n, n_classes), dtype=np.int64)
        onehot[positions, labels[order]] = 1
        cum = np.cumsum(onehot, axis=0)
        left = cum[:-1]
        right = cum[-1] - left
        metric = np.sum(left * left, axis=1) / n_left + np.sum(right * right, axis=1) / n_right
        metric[~valid] = -np.inf
        j = int(np.argmax(metric))
        if metric[j] > best_metric:
            best_metric = float(metric[j])
            best_feat = f
            thr = (v[j] + v[j + 1]) * 0.5
            best_thr = float(v[j]) if thr >= v[j + 1] else float(thr)
    return best_feat, best_thr, best_metric


def best_regression_split(values: np.ndarray, targets: np.ndarray):
    """Best squared-error split over candidate feature rows.

    values: (n_features, n_samples) float64; targets: (n_samples,) float64.
    """
    n = values.shape[1]
    best_feat, best_thr, best_metric = NO_SPLIT
    n_left = np.arange(1, n, dtype=np.float64)
    n_right = n - n_left
    for f in range(values.shape[0]):
        row = values[f]
        order = np.argsort(row, kind="stable")
        v = row[order]
        valid = v[1:] > v[:-1]
        if not valid.any():
            continue
        cum = np.cumsum(targets[order])
        total = cum[-1]
        sum_left = cum[:-1]
        sum_right = total - sum_left
        metric = (sum_left * sum_left) / n_left + (sum_right * sum_right) / n_right
        metric[~valid] = -np.inf
        j = int(np.argmax(metric))
        if metric[j] > best_metric:
            best_metric = float(metric[j])
            best_feat = f
            thr = (v[j] + v[j + 1]) * 0.5
            best_thr = float(v[j]) if thr >= v[j + 1] else float(thr)
    return best_feat, best_thr, best_metric
