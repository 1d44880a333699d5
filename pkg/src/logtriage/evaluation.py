"""Stratified cross-validation harness and the comparison report.

Per fold, the vocabulary is rebuilt from the training fold alone and both
folds are vectorized with it, so no test-fold token can influence features
or models. Fit and predict are timed separately on a monotonic clock;
vectorization happens outside both timers because feature extraction cost
is shared by every algorithm.

Fold assignment deals each class's shuffled indices round-robin starting at
fold (class ordinal mod k), which staggers remainders across folds and
keeps per-class fold counts within one of each other.
"""

import platform
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ShapeError, StratificationError, ValidationError
from .features import Dataset, build_vocabulary, vectorize
from .ingest import SelectionRules, scan_dump
from .labels import FailureClass
from .preprocess import CleaningConfig, TokenDocument, preprocess_bundle
from .stats import FriedmanResult, NemenyiResult, ScoreMatrix, friedman_test, nemenyi_pairwise

__all__ = [
    "FoldAssignment",
    "FoldResult",
    "ComparisonReport",
    "stratified_folds",
    "accuracy",
    "weighted_f1",
    "load_documents",
    "run_cv_documents",
]


def load_documents(
    root: str | Path,
    entries: list[tuple[str, FailureClass]],
    rules: SelectionRules | None = None,
    cleaning: CleaningConfig | None = None,
) -> tuple[list[TokenDocument], list[FailureClass]]:
    """Scan and preprocess every manifest bundle under a corpus root."""
    root = Path(root)
    docs: list[TokenDocument] = []
    labels: list[FailureClass] = []
    for rel_path, label in entries:
        bundle = scan_dump(root / rel_path, rules, label=label)
        docs.append(preprocess_bundle(bundle, cleaning))
        labels.append(label)
    return docs, labels


@dataclass(frozen=True)
class FoldAssignment:
    k: int
    assignment: np.ndarray  # instance index -> fold id

    def fold_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def complement_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)


def stratified_folds(labels: list[FailureClass], k: int, seed: int = 0) -> FoldAssignment:
    """Deal each class round-robin into k folds after a seeded shuffle."""
    if k < 2:
        raise ValidationError(f"fold count must be at least 2, got {k}")
    n = len(labels)
    if n == 0:
        raise ValidationError("cannot assign folds over zero instances")
    rng = np.random.default_rng(seed)
    assignment = np.full(n, -1, dtype=np.int64)
    for cls in sorted(set(labels)):
        indices = np.flatnonzero(np.array([lab == cls for lab in labels]))
        if len(indices) < k:
            raise StratificationError(
                f"class {cls} has {len(indices)} instances, fewer than k={k}"
            )
        shuffled = indices[rng.permutation(len(indices))]
        start = cls.ordinal % k
        for j, idx in enumerate(shuffled):
            assignment[idx] = (start + j) % k
    return FoldAssignment(k=k, assignment=assignment)


def accuracy(truth: list[FailureClass], predicted: list[FailureClass]) -> float:
    if len(truth) != len(predicted):
        raise ShapeError(f"{len(truth)} truth labels vs {len(predicted)} predictions")
    if not truth:
        raise ValidationError("accuracy over zero instances is undefined")
    return sum(t == p for t, p in zip(truth, predicted)) / len(truth)


def weighted_f1(truth: list[FailureClass], predicted: list[FailureClass]) -> float:
    """Support-weighted mean of per-class F1 over classes present in truth."""
    if len(truth) != len(predicted):
        raise ShapeError(f"{len(truth)} truth labels vs {len(predicted)} predictions")
    if not truth:
        raise ValidationError("weighted F1 over zero instances is undefined")
    total = 0.0
    for cls in sorted(set(truth)):
        support = sum(t == cls for t in truth)
        tp = sum(t == cls and p == cls for t, p in zip(truth, predicted))
        fp = sum(t != cls and p == cls for t, p in zip(truth, predicted))
        fn = support - tp
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / support
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        total += (support / len(truth)) * f1
    return total


@dataclass(frozen=True)
class FoldResult:
    algorithm: str
    fold: int
    accuracy: float
    weighted_f1: float
    train_seconds: float
    predict_seconds: float


@dataclass(frozen=True)
class ComparisonReport:
    algorithms: tuple[str, ...]
    k: int
    seed: int
    accuracy_matrix: np.ndarray  # (k, n_algorithms)
    f1_matrix: np.ndarray
    train_seconds: np.ndarray
    predict_seconds: np.ndarray
    friedman_accuracy: FriedmanResult | None
    friedman_f1: FriedmanResult | None
    nemenyi_accuracy: NemenyiResult | None
    nemenyi_f1: NemenyiResult | None
    environment: str
    config_echo: dict = field(default_factory=dict)

    @property
    def mean_accuracy(self) -> np.ndarray:
        return self.accuracy_matrix.mean(axis=0)

    @property
    def mean_f1(self) -> np.ndarray:
        return self.f1_matrix.mean(axis=0)

    @property
    def mean_train_seconds(self) -> np.ndarray:
        return self.train_seconds.mean(axis=0)

    @property
    def mean_predict_seconds(self) -> np.ndarray:
        return self.predict_seconds.mean(axis=0)

    def fold_results(self) -> list[FoldResult]:
        out = []
        for a, algo in enumerate(self.algorithms):
            for fold in range(self.k):
                out.append(FoldResult(
                    algorithm=algo,
                    fold=fold,
                    accuracy=float(self.accuracy_matrix[fold, a]),
                    weighted_f1=float(self.f1_matrix[fold, a]),
                    train_seconds=float(self.train_seconds[fold, a]),
                    predict_seconds=float(self.predict_seconds[fold, a]),
                ))
        return out


def _environment_note() -> str:
    return (
        f"{platform.platform()}; python {platform.python_version()}; "
        f"{platform.machine()}"
    )


def run_cv_documents(
    docs: list[TokenDocument],
    labels: list[FailureClass],
    specs: list,
    k: int,
    seed: int = 0,
    min_df: int = 2,
    fit_fn=None,
    config_echo: dict | None = None,
) -> ComparisonReport:
    """Cross-validate every spec over preprocessed documents.

    fit_fn(data, spec) -> model defaults to the algorithm dispatcher; tests
    inject stubs through it.
    """
    if fit_fn is None:
        from .classifiers import fit_model as fit_fn
    if len(docs) != len(labels):
        raise ShapeError(f"{len(docs)} documents vs {len(labels)} labels")
    if not specs:
        raise ValidationError("no classifier specs given")

    folds = stratified_folds(labels, k, seed)
    algorithms = tuple(spec.algorithm for spec in specs)
    n_algos = len(specs)
    acc = np.zeros((k, n_algos))
    f1 = np.zeros((k, n_algos))
    t_train = np.zeros((k, n_algos))
    t_predict = np.zeros((k, n_algos))

    for fold in range(k):
        train_idx = folds.complement_indices(fold)
        test_idx = folds.fold_indices(fold)
        train_labels = [labels[i] for i in train_idx]
        test_labels = [labels[i] for i in test_idx]
        vocab = build_vocabulary([docs[i] for i in train_idx], min_df=min_df)
        checksum = vocab.checksum()
        train_data = Dataset(
            tuple(vectorize(vocab, docs[i]) for i in train_idx),
            tuple(train_labels),
            vocab_checksum=checksum,
        )
        test_vectors = tuple(vectorize(vocab, docs[i]) for i in test_idx)

        for a, spec in enumerate(specs):
            t0 = time.perf_counter()
            model = fit_fn(train_data, spec)
            t1 = time.perf_counter()
            predictions = model.predict(test_vectors)
            t2 = time.perf_counter()
            acc[fold, a] = accuracy(test_labels, predictions)
            f1[fold, a] = weighted_f1(test_labels, predictions)
            t_train[fold, a] = t1 - t0
            t_predict[fold, a] = t2 - t1

    if n_algos >= 2:
        acc_scores = ScoreMatrix(acc, algorithms)
        f1_scores = ScoreMatrix(f1, algorithms)
        fr_acc, fr_f1 = friedman_test(acc_scores), friedman_test(f1_scores)
        ne_acc, ne_f1 = nemenyi_pairwise(acc_scores), nemenyi_pairwise(f1_scores)
    else:
        fr_acc = fr_f1 = ne_acc = ne_f1 = None

    return ComparisonReport(
        algorithms=algorithms,
        k=k,
        seed=seed,
        accuracy_matrix=acc,
        f1_matrix=f1,
        train_seconds=t_train,
        predict_seconds=t_predict,
        friedman_accuracy=fr_acc,
        friedman_f1=fr_f1,
        nemenyi_accuracy=ne_acc,
        nemenyi_f1=ne_f1,
        environment=_environment_note(),
        config_echo=dict(config_echo or {}),
    )
