#!/usr/bin/env python3
"""Benchmark the compiled split-search kernels against the numpy fallback.

Times the two hot training paths that sit on the kernels (random forest
and gradient boosting) plus the raw split search, on a synthetic dense
problem shaped like a vectorized log corpus. Both backends produce
identical models, so only the wall clock differs.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

import logtriage._kernels as kernels
from logtriage._kernels import _pykernels
from logtriage.classifiers import ClassifierSpec, fit_gradient_boosting, fit_random_forest
from logtriage.features import Dataset, SparseVector
from logtriage.labels import ALL_CLASSES

try:
    from logtriage._kernels import _ckernels
except ImportError:
    _ckernels = None


def sparse(row):
    idx = np.flatnonzero(row)
    return SparseVector(idx.astype(np.int32), row[idx], len(row))


def make_dataset(n=200, dim=120, seed=0):
    rng = np.random.default_rng(seed)
    X = np.round(rng.random((n, dim)), 3) * (rng.random((n, dim)) < 0.3)
    labels = tuple(ALL_CLASSES[i] for i in rng.integers(0, 5, n))
    return Dataset(tuple(sparse(r) for r in X), labels)


def time_call(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_raw_splits(backend, trials, rng):
    values = np.ascontiguousarray(rng.random((12, 400)))
    labels = np.ascontiguousarray(rng.integers(0, 5, 400), dtype=np.int64)
    targets = np.ascontiguousarray(rng.normal(size=400))

    def run():
        for _ in range(trials):
            backend.best_classification_split(values, labels, 5)
            backend.best_regression_split(values, targets)

    return run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled kernels are not built; run pip install -e . first")
        return

    trees = 20 if args.quick else 60
    stages = 10 if args.quick else 30
    split_trials = 100 if args.quick else 400
    data = make_dataset()
    rng = np.random.default_rng(1)

    rows = []

    def record(task, fn_for):
        timings = {}
        for name, backend_fns in (("compiled", _ckernels), ("pure-python", _pykernels)):
            kernels.best_classification_split = backend_fns.best_classification_split
            kernels.best_regression_split = backend_fns.best_regression_split
            timings[name] = time_call(fn_for())
        rows.append((task, timings["compiled"], timings["pure-python"]))

    record(f"raw split search x{split_trials}",
           lambda: bench_raw_splits(kernels, split_trials, rng))
    record(f"random forest fit ({trees} trees)",
           lambda: (lambda: fit_random_forest(
               data, ClassifierSpec("random_forest", seed=3, params={"trees": trees}))))
    record(f"gradient boosting fit ({stages} stages)",
           lambda: (lambda: fit_gradient_boosting(
               data, ClassifierSpec("gradient_boosting", params={"stages": stages}))))

    # restore import-time selection
    kernels.best_classification_split = _ckernels.best_classification_split
    kernels.best_regression_split = _ckernels.best_regression_split

    width = max(len(r[0]) for r in rows)
    print(f"{'task'.ljust(width)}  compiled   pure-python  speedup")
    for task, fast, slow in rows:
        print(f"{task.ljust(width)}  {fast:8.3f}s  {slow:10.3f}s  {slow / fast:6.1f}x")


if __name__ == "__main__":
    main()
