"""Acceptance suite: twelve pinned criteria, one pass line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see a line per
criterion. The end-to-end cross-validation criteria build two 200-bundle
corpora and evaluate all five algorithms under 10-fold CV, so this module
dominates the suite's runtime (a few minutes).
"""

import math
import time

import numpy as np
import pytest

from logtriage.classifiers import ClassifierSpec, fit_knn, fit_model
from logtriage.classifiers.mlp import MlpNetwork, PARAM_NAMES
from logtriage.corpus import CorpusSpec, generate_corpus, selected_paths
from logtriage.evaluation import (
    load_documents,
    run_cv_documents,
    stratified_folds,
)
from logtriage.features import Dataset, SparseVector, build_vocabulary, vectorize
from logtriage.ingest import compute_reduction, scan_dump
from logtriage.labels import ALL_CLASSES
from logtriage.preprocess import TokenDocument, clean_text
from logtriage.report import render_scores_json
from logtriage.stats import (
    ScoreMatrix,
    chi2_upper_tail,
    friedman_test,
    nemenyi_pairwise,
    studentized_range_cdf,
)
from logtriage.store import load_model, save_model

from conftest import dense_to_sparse as sv
from test_preprocess import GOLDEN_PAIRS

CORPUS_SEED = 20260809
CV_SEED = 99

FIVE_SPECS = [
    ClassifierSpec("linear_svm", seed=1),
    ClassifierSpec("knn", seed=1),
    ClassifierSpec("random_forest", seed=1, params={"trees": 100}),  # 1000 stays the default
    ClassifierSpec("gradient_boosting", seed=1),
    ClassifierSpec("mlp", seed=1),
]


def passed(line: str) -> None:
    print(f"[PASS] {line}")


#: wall-clock spent on the end-to-end pieces, for the 10-minute budget check
ELAPSED: dict[str, float] = {}


@pytest.fixture(scope="module")
def corpus_signal(tmp_path_factory):
    t0 = time.perf_counter()
    root = tmp_path_factory.mktemp("acceptance") / "signal"
    spec = CorpusSpec(bundles_per_class=40, services=3, noise_lines=(20, 40),
                      signature_strength=0.5, seed=CORPUS_SEED)
    manifest = generate_corpus(spec, root)
    docs, labels = load_documents(root, list(manifest.entries))
    ELAPSED["signal_corpus"] = time.perf_counter() - t0
    return spec, root, manifest, docs, labels


@pytest.fixture(scope="module")
def cv_signal(corpus_signal):
    _, _, _, docs, labels = corpus_signal
    t0 = time.perf_counter()
    report = run_cv_documents(docs, labels, FIVE_SPECS, k=10, seed=CV_SEED, min_df=2)
    ELAPSED["signal_cv"] = time.perf_counter() - t0
    return report


def test_criterion_01_tfidf_oracle():
    t0 = time.perf_counter()
    docs = [TokenDocument(("error", "pod", "crash")),
            TokenDocument(("pod", "running")),
            TokenDocument(("error", "timeout"))]
    vocab = build_vocabulary(docs, min_df=1)
    assert vocab.idf[vocab.index["error"]] == pytest.approx(math.log(4 / 3) + 1, abs=1e-9)
    assert vocab.idf[vocab.index["crash"]] == pytest.approx(math.log(2) + 1, abs=1e-9)
    assert vocab.idf[vocab.index["pod"]] == pytest.approx(math.log(4 / 3) + 1, abs=1e-9)
    assert vocab.idf[vocab.index["running"]] == pytest.approx(math.log(2) + 1, abs=1e-9)
    assert vocab.idf[vocab.index["timeout"]] == pytest.approx(math.log(2) + 1, abs=1e-9)
    for doc in docs:
        assert vectorize(vocab, doc).norm() == pytest.approx(1.0, abs=1e-9)
    assert time.perf_counter() - t0 < 1.0
    passed("criterion 1: TF-IDF idf values match hand computation; unit norms hold")


def test_criterion_02_cleaning_golden_pairs():
    t0 = time.perf_counter()
    assert len(GOLDEN_PAIRS) == 20
    for raw, expected in GOLDEN_PAIRS:
        cleaned = clean_text(raw)
        assert cleaned == expected, f"{raw!r} -> {cleaned!r}, wanted {expected!r}"
        assert clean_text(cleaned) == cleaned
    assert time.perf_counter() - t0 < 1.0
    passed("criterion 2: 20 golden cleaning pairs exact, idempotent")


def test_criterion_03_selection_rule(corpus_signal, tmp_path):
    spec, root, manifest, _, _ = corpus_signal
    for rel, _ in list(manifest.entries)[::17]:  # spot-check across classes
        bundle = scan_dump(root / rel)
        assert [f.path for f in bundle.files] == selected_paths(spec, rel)

    fixture = tmp_path / "fixture"
    (fixture / "pods" / "a" / "containers").mkdir(parents=True)
    (fixture / "pods" / "a" / "containers" / "a.log").write_text("abcd")
    (fixture / "nodes").mkdir()
    (fixture / "nodes" / "big.log").write_text("x" * 96)
    stats = compute_reduction(fixture, scan_dump(fixture))
    assert stats.total_bytes == 100 and stats.selected_bytes == 4
    assert f"{stats.reduction_rounded:.4f}" == "0.9600"
    passed("criterion 3: selection matches generator exactly; 4/100 B -> 0.9600")


def test_criterion_04_knn_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(404)
    n, m, dim = 500, 200, 40
    density = rng.random((n, dim)) < 0.25
    train = np.round(rng.random((n, dim)), 3) * density
    labels = tuple(ALL_CLASSES[i] for i in rng.integers(0, 5, n))
    data = Dataset(tuple(sv(r) for r in train), labels)
    model = fit_knn(data, ClassifierSpec("knn", params={"k": 5}))

    queries = np.round(rng.random((m, dim)), 3) * (rng.random((m, dim)) < 0.25)
    got = model.predict([sv(q) for q in queries])

    classes = sorted(set(labels))
    expected = []
    for q in queries:
        d2 = np.array([float(np.sum((q - t) ** 2)) for t in train])
        order = np.argsort(d2, kind="stable")[:5]
        votes = {c: 0 for c in classes}
        for i in order:
            votes[labels[i]] += 1
        top = max(votes.values())
        tied = {c for c, v in votes.items() if v == top}
        winner = next(labels[i] for i in order if labels[i] in tied)
        expected.append(winner)
    agreement = np.mean([g == e for g, e in zip(got, expected)])
    assert agreement == 1.0
    assert time.perf_counter() - t0 < 30.0
    passed("criterion 4: KNN matches brute-force oracle on 200/500 queries, 100%")


def test_criterion_05_mlp_gradient_check():
    rng = np.random.default_rng(55)
    net = MlpNetwork.initialize(6, (5, 4), 3, rng)
    X = rng.normal(0, 1, (4, 6))
    Y = np.eye(3)[rng.integers(0, 3, 4)]
    _, grads = net.loss_and_grads(X, Y)
    h = 1e-6
    worst = 0.0
    for name in PARAM_NAMES:
        flat = net.params[name].reshape(-1)
        for i in range(flat.size):
            keep = flat[i]
            flat[i] = keep + h
            plus, _ = net.loss_and_grads(X, Y)
            flat[i] = keep - h
            minus, _ = net.loss_and_grads(X, Y)
            flat[i] = keep
            numeric = (plus - minus) / (2 * h)
            analytic = grads[name].reshape(-1)[i]
            worst = max(worst, abs(numeric - analytic) / max(abs(numeric), abs(analytic), 1e-8))
    assert worst < 1e-4
    passed(f"criterion 5: MLP analytic gradients match finite differences (max rel err {worst:.2e})")


def test_criterion_06_gb_deviance_descent(two_blobs):
    X, labels = two_blobs
    data = Dataset(tuple(sv(r) for r in X), tuple(labels))
    model = fit_model(data, ClassifierSpec("gradient_boosting", params={"stages": 10}))
    dev = model.training_deviance
    first_ten = dev[:11]
    assert all(b <= a for a, b in zip(first_ten, first_ten[1:]))
    assert all(b < a for a, b in zip(dev[:4], dev[1:4]))
    passed("criterion 6: GB deviance non-increasing over 10 stages, strict over first 3")


def test_criterion_07_friedman_oracle():
    m = ScoreMatrix(np.array([[3.0, 2.0, 1.0]] * 3), ("a", "b", "c"))
    result = friedman_test(m)
    assert abs(result.q_statistic - 6.0) < 1e-9
    assert abs(result.p_value - math.exp(-3)) < 1e-9
    tied = friedman_test(ScoreMatrix(np.array([[0.4, 0.4, 0.4]] * 3), ("a", "b", "c")))
    assert tied.q_statistic == 0.0 and tied.p_value == 1.0
    passed("criterion 7: Friedman fixture gives Q=6, p=e^-3; tied input gives Q=0, p=1")


def test_criterion_08_studentized_range_numerics():
    for q in (0.5, 1.0, 2.0, 3.0):
        identity = 2 * (0.5 * (1 + math.erf(q / 2.0))) - 1
        assert studentized_range_cdf(q, 2) == pytest.approx(identity, abs=1e-6)
    assert studentized_range_cdf(3.858, 5) == pytest.approx(0.95, abs=2e-3)
    assert chi2_upper_tail(6.0, 2) == pytest.approx(math.exp(-3), abs=1e-12)
    passed("criterion 8: studentized-range and chi-square tails hit their anchors")


# fixed 10x5 fold-score fixture with its studentized-range reference p-matrix
NEMENYI_FIXTURE = np.array([
    [0.60, 0.70, 0.86, 0.71, 0.61],
    [0.73, 0.60, 0.73, 0.75, 0.64],
    [0.66, 0.65, 0.71, 0.70, 0.71],
    [0.63, 0.59, 0.66, 0.73, 0.76],
    [0.74, 0.64, 0.89, 0.74, 0.65],
    [0.76, 0.62, 0.73, 0.76, 0.62],
    [0.77, 0.62, 0.77, 0.67, 0.65],
    [0.66, 0.49, 0.80, 0.77, 0.75],
    [0.73, 0.70, 0.74, 0.78, 0.61],
    [0.72, 0.71, 0.77, 0.66, 0.58],
])

# reference computed once with scipy.stats.studentized_range (df=inf) and pinned
NEMENYI_REFERENCE_P = np.array([
    [1.000000, 0.241947, 0.392543, 0.789935, 0.915320],
    [0.241947, 1.000000, 0.001267, 0.012725, 0.750217],
    [0.392543, 0.001267, 1.000000, 0.969152, 0.067405],
    [0.789935, 0.012725, 0.969152, 1.000000, 0.275785],
    [0.915320, 0.750217, 0.067405, 0.275785, 1.000000],
])


def test_criterion_09_nemenyi_fixture():
    m = ScoreMatrix(NEMENYI_FIXTURE, ("svm", "knn", "rf", "gb", "mlp"))
    result = nemenyi_pairwise(m)
    assert np.allclose(result.p_matrix, NEMENYI_REFERENCE_P, atol=1e-3)
    assert np.array_equal(result.p_matrix, result.p_matrix.T)
    assert np.all(np.diag(result.p_matrix) == 1.0)
    passed("criterion 9: pinned 10x5 Nemenyi p-matrix within 1e-3 of reference")


def test_criterion_10a_cv_learnable_corpus(cv_signal):
    report = cv_signal
    for a, algo in enumerate(report.algorithms):
        assert report.mean_accuracy[a] >= 0.8, (algo, report.mean_accuracy[a])
        assert report.mean_f1[a] >= 0.75, (algo, report.mean_f1[a])
    passed("criterion 10a: all five algorithms >= 0.8 accuracy, >= 0.75 F1 at strength 0.5")


def test_criterion_10b_cv_pure_noise_is_chance(tmp_path_factory):
    t0 = time.perf_counter()
    root = tmp_path_factory.mktemp("acceptance") / "noise"
    spec = CorpusSpec(bundles_per_class=40, services=3, noise_lines=(20, 40),
                      signature_strength=0.0, seed=CORPUS_SEED)
    manifest = generate_corpus(spec, root)
    docs, labels = load_documents(root, list(manifest.entries))
    report = run_cv_documents(docs, labels, FIVE_SPECS, k=10, seed=CV_SEED, min_df=2)
    n = len(labels)
    half = 1.959963984540054 * math.sqrt(0.2 * 0.8 / n)
    lo, hi = 0.2 - half, 0.2 + half
    for a, algo in enumerate(report.algorithms):
        acc = float(report.mean_accuracy[a])
        assert lo <= acc <= hi, (algo, acc, (lo, hi))
    noise_elapsed = time.perf_counter() - t0
    total = ELAPSED.get("signal_corpus", 0.0) + ELAPSED.get("signal_cv", 0.0) + noise_elapsed
    assert total < 600.0, f"end-to-end CV criterion took {total:.0f}s"
    passed("criterion 10b: every algorithm inside the 95% binomial band around 0.2 at strength 0")


def test_criterion_11_stratification_property():
    rng = np.random.default_rng(1111)
    for trial in range(1000):
        k = int(rng.integers(2, 7))
        labels = []
        for cls in ALL_CLASSES[: int(rng.integers(1, 6))]:
            labels += [cls] * int(rng.integers(k, k + 8))
        order = rng.permutation(len(labels))
        labels = [labels[i] for i in order]
        folds = stratified_folds(labels, k=k, seed=int(rng.integers(0, 2**32)))
        # partition of the index set
        union = np.concatenate([folds.fold_indices(f) for f in range(k)])
        assert sorted(union.tolist()) == list(range(len(labels)))
        # per-class per-fold counts differ by at most one
        for cls in set(labels):
            counts = [sum(labels[i] == cls for i in folds.fold_indices(f)) for f in range(k)]
            assert max(counts) - min(counts) <= 1, (trial, cls, counts)
    passed("criterion 11: 1000 random multisets stratify within one per class per fold")


def test_criterion_12_determinism_and_persistence(tmp_path_factory, tmp_path):
    root = tmp_path_factory.mktemp("acceptance") / "determinism"
    spec = CorpusSpec(bundles_per_class=8, services=2, noise_lines=(10, 20),
                      signature_strength=0.5, seed=7)
    manifest = generate_corpus(spec, root)
    docs, labels = load_documents(root, list(manifest.entries))
    small_specs = [
        ClassifierSpec("linear_svm", seed=2, params={"epochs": 15}),
        ClassifierSpec("knn", seed=2, params={"k": 3}),
        ClassifierSpec("random_forest", seed=2, params={"trees": 25}),
        ClassifierSpec("gradient_boosting", seed=2, params={"stages": 15}),
        ClassifierSpec("mlp", seed=2, params={"hidden": (32, 16), "epochs": 5}),
    ]
    first = run_cv_documents(docs, labels, small_specs, k=4, seed=3, min_df=2,
                             config_echo={"k": 4, "seed": 3})
    second = run_cv_documents(docs, labels, small_specs, k=4, seed=3, min_df=2,
                              config_echo={"k": 4, "seed": 3})
    assert render_scores_json(first).encode() == render_scores_json(second).encode()

    vocab = build_vocabulary(docs, min_df=2)
    data = Dataset(tuple(vectorize(vocab, d) for d in docs), tuple(labels),
                   vocab_checksum=vocab.checksum())
    rng = np.random.default_rng(50)
    dim = data.dimension
    probes = []
    for _ in range(50):
        dense = np.round(rng.random(dim), 3) * (rng.random(dim) < 0.3)
        probes.append(sv(dense))
    probes.append(SparseVector(np.empty(0, np.int32), np.empty(0, np.float64), dim))
    for model_spec in small_specs:
        model = fit_model(data, model_spec)
        path = tmp_path / f"{model_spec.algorithm}.model"
        save_model(model, path)
        assert load_model(path).predict(probes) == model.predict(probes)
    passed("criterion 12: same-seed evaluate byte-identical; save/load exact on 50-probe set")
