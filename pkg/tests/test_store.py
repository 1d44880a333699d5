"""Artifact persistence: exact round trips, corruption and version gates."""

import numpy as np
import pytest

from logtriage.classifiers import ClassifierSpec, fit_model
from logtriage.errors import ArtifactCorruptError, UnsupportedVersionError
from logtriage.evaluation import run_cv_documents
from logtriage.features import Dataset
from logtriage.labels import ALL_CLASSES
from logtriage.preprocess import TokenDocument
from logtriage.store import (
    MODEL_FORMAT,
    ArtifactStore,
    load_model,
    load_report,
    save_artifact,
    save_model,
    save_report,
)

from conftest import dense_to_sparse as sv

ALL_SPECS = [
    ClassifierSpec("linear_svm", seed=1, params={"epochs": 8}),
    ClassifierSpec("knn", seed=1, params={"k": 3}),
    ClassifierSpec("random_forest", seed=1, params={"trees": 6}),
    ClassifierSpec("gradient_boosting", seed=1, params={"stages": 4}),
    ClassifierSpec("mlp", seed=1, params={"hidden": (10, 5), "epochs": 3}),
]


@pytest.fixture(scope="module")
def training_setup():
    rng = np.random.default_rng(23)
    X = rng.random((30, 9))
    labels = tuple(ALL_CLASSES[i] for i in rng.integers(0, 5, 30))
    data = Dataset(tuple(sv(r) for r in X), labels, vocab_checksum="abc123")
    probes = [sv(r) for r in rng.random((20, 9))]
    return data, probes


@pytest.mark.parametrize("spec", ALL_SPECS, ids=[s.algorithm for s in ALL_SPECS])
class TestModelRoundTrip:
    def test_predictions_bit_identical_after_reload(self, training_setup, tmp_path, spec):
        data, probes = training_setup
        model = fit_model(data, spec)
        path = tmp_path / "m.model"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.predict(probes) == model.predict(probes)
        assert loaded.classes == model.classes
        assert loaded.vocab_checksum == model.vocab_checksum
        assert loaded.spec.params == model.spec.params

    def test_byte_flip_is_corruption(self, training_setup, tmp_path, spec):
        data, _ = training_setup
        model = fit_model(data, spec)
        path = tmp_path / "m.model"
        checksum = save_model(model, path)
        text = path.read_text()
        flipped = checksum[0]
        replacement = "0" if flipped != "0" else "1"
        path.write_text(text.replace(checksum, replacement + checksum[1:], 1))
        with pytest.raises(ArtifactCorruptError):
            load_model(path)


class TestArtifactGates:
    def test_payload_byte_flip_is_corruption(self, training_setup, tmp_path):
        data, _ = training_setup
        model = fit_model(data, ALL_SPECS[0])
        path = tmp_path / "m.model"
        save_model(model, path)
        text = path.read_text()
        anchor = text.index('"data": "') + len('"data": "')
        char = text[anchor + 5]
        replacement = "A" if char != "A" else "B"
        path.write_text(text[: anchor + 5] + replacement + text[anchor + 6:])
        with pytest.raises(ArtifactCorruptError):
            load_model(path)

    def test_future_version_rejected_without_partial_load(self, tmp_path):
        path = tmp_path / "future.model"
        save_artifact(path, "triage-model/999", {"algorithm": "linear_svm"})
        with pytest.raises(UnsupportedVersionError):
            load_model(path)

    def test_non_json_is_corruption(self, tmp_path):
        path = tmp_path / "junk.model"
        path.write_text("this is not an artifact")
        with pytest.raises(ArtifactCorruptError):
            load_model(path)

    def test_missing_header_is_corruption(self, tmp_path):
        path = tmp_path / "head.model"
        path.write_text('{"payload": {}}')
        with pytest.raises(ArtifactCorruptError):
            load_model(path)

    def test_format_is_checked_before_payload(self, tmp_path):
        path = tmp_path / "other.model"
        save_artifact(path, MODEL_FORMAT + "x", {})
        with pytest.raises(UnsupportedVersionError):
            load_model(path)


class TestArtifactStore:
    def test_layout_created_and_paths_compose(self, tmp_path):
        store = ArtifactStore(tmp_path / "store").ensure()
        for sub in ("models", "vocabularies", "reports", "corpora"):
            assert (tmp_path / "store" / sub).is_dir()
        assert store.model_path("rf").name == "rf.model"
        assert store.vocabulary_path("abc").name == "abc.vocab"
        assert store.report_dir("run1").parent == store.reports_dir

    def test_store_round_trip_through_layout(self, training_setup, tmp_path):
        data, probes = training_setup
        store = ArtifactStore(tmp_path / "store").ensure()
        model = fit_model(data, ALL_SPECS[1])
        path = store.model_path("knn")
        save_model(model, path)
        assert load_model(path).predict(probes) == model.predict(probes)


class TestReportRoundTrip:
    def test_report_survives_store(self, tmp_path):
        docs = []
        labels = []
        for cls in ALL_CLASSES:
            for i in range(4):
                docs.append(TokenDocument(tokens=("base", f"{cls.value}tok", f"x{i % 2}")))
                labels.append(cls)
        specs = [ClassifierSpec("knn", params={"k": 3}),
                 ClassifierSpec("linear_svm", params={"epochs": 5})]
        report = run_cv_documents(docs, labels, specs, k=2, seed=1, min_df=1,
                                  config_echo={"k": 2})
        path = tmp_path / "r.report"
        save_report(report, path)
        loaded = load_report(path)
        assert np.array_equal(loaded.accuracy_matrix, report.accuracy_matrix)
        assert np.array_equal(loaded.f1_matrix, report.f1_matrix)
        assert loaded.algorithms == report.algorithms
        assert loaded.friedman_accuracy.q_statistic == report.friedman_accuracy.q_statistic
        assert np.array_equal(loaded.nemenyi_f1.p_matrix, report.nemenyi_f1.p_matrix)
        assert loaded.config_echo == report.config_echo
        # means recompute exactly from the stored matrices
        assert np.allclose(loaded.mean_accuracy, loaded.accuracy_matrix.mean(axis=0), atol=0)

    def test_single_algorithm_report_has_no_statistics(self, tmp_path):
        docs = []
        labels = []
        for cls in ALL_CLASSES:
            for i in range(4):
                docs.append(TokenDocument(tokens=("base", f"{cls.value}tok", f"x{i % 2}")))
                labels.append(cls)
        report = run_cv_documents(docs, labels, [ClassifierSpec("knn", params={"k": 3})],
                                  k=2, seed=1, min_df=1)
        path = tmp_path / "single.report"
        save_report(report, path)
        loaded = load_report(path)
        assert loaded.friedman_accuracy is None
        assert loaded.nemenyi_f1 is None
        assert np.array_equal(loaded.accuracy_matrix, report.accuracy_matrix)
