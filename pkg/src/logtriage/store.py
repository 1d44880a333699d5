"""Versioned, checksummed persistence for models and reports.

Every artifact is one JSON document: a format tag, a sha256 over the
canonical serialization of the payload (sorted keys, no whitespace), and
the payload itself. Numpy arrays travel as base64 of their raw bytes, so a
round trip is bit-exact and a loaded model predicts identically to the one
saved. Unknown format versions are rejected outright, never guessed at.
"""

import base64
import hashlib
import json
from pathlib import Path

import numpy as np

from .classifiers import (
    ClassifierSpec,
    GradientBoostingModel,
    KnnModel,
    LinearSvmModel,
    MlpModel,
    MlpNetwork,
    RandomForestModel,
    TrainedModel,
)
from .classifiers.tree import TreeNode
from .errors import ArtifactCorruptError, UnsupportedVersionError
from .evaluation import ComparisonReport
from .labels import FailureClass
from .stats import FriedmanResult, NemenyiResult

MODEL_FORMAT = "triage-model/1"
REPORT_FORMAT = "triage-report/1"


class ArtifactStore:
    """Conventional on-disk layout for everything a run produces.

    ``root/models``, ``root/vocabularies``, ``root/reports`` and
    ``root/corpora``; vocabularies are filed by their content checksum so a
    model's vocabulary reference resolves to a path.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)

    @property
    def models_dir(self) -> Path:
        return self.root / "models"

    @property
    def vocabularies_dir(self) -> Path:
        return self.root / "vocabularies"

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    @property
    def corpora_dir(self) -> Path:
        return self.root / "corpora"

    def ensure(self) -> "ArtifactStore":
        for path in (self.models_dir, self.vocabularies_dir, self.reports_dir, self.corpora_dir):
            path.mkdir(parents=True, exist_ok=True)
        return self

    def model_path(self, name: str) -> Path:
        return self.models_dir / f"{name}.model"

    def vocabulary_path(self, checksum: str) -> Path:
        return self.vocabularies_dir / f"{checksum}.vocab"

    def report_dir(self, name: str) -> Path:
        return self.reports_dir / name

    def corpus_dir(self, name: str) -> Path:
        return self.corpora_dir / name


def _encode(obj):
    if isinstance(obj, np.ndarray):
        return {
            "__nd__": True,
            "dtype": str(obj.dtype),
            "shape": list(obj.shape),
            "data": base64.b64encode(np.ascontiguousarray(obj).tobytes()).decode("ascii"),
        }
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, (np.integer, np.floating)):
        return obj.item()
    return obj


def _decode(obj):
    if isinstance(obj, dict):
        if obj.get("__nd__"):
            data = base64.b64decode(obj["data"])
            return np.frombuffer(data, dtype=obj["dtype"]).reshape(obj["shape"]).copy()
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def _canonical(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def save_artifact(path: str | Path, fmt: str, payload: dict) -> str:
    """Write a checksummed artifact; returns the payload checksum."""
    encoded = _encode(payload)
    checksum = hashlib.sha256(_canonical(encoded)).hexdigest()
    document = {"format": fmt, "sha256": checksum, "payload": encoded}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(document, fh, sort_keys=True, indent=1)
        fh.write("\n")
    return checksum


def load_artifact(path: str | Path, fmt: str) -> dict:
    """Read an artifact, enforcing format version and checksum."""
    try:
        with open(path, encoding="utf-8") as fh:
            document = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ArtifactCorruptError(f"{path}: not a parseable artifact: {exc}") from exc
    if not isinstance(document, dict) or "format" not in document:
        raise ArtifactCorruptError(f"{path}: missing artifact header")
    got_fmt = document["format"]
    if got_fmt != fmt:
        raise UnsupportedVersionError(
            f"{path}: format {got_fmt!r} is not supported (expected {fmt!r})"
        )
    payload = document.get("payload")
    checksum = hashlib.sha256(_canonical(payload)).hexdigest()
    if checksum != document.get("sha256"):
        raise ArtifactCorruptError(f"{path}: checksum mismatch; artifact is corrupt")
    return _decode(payload)


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


def save_model(model: TrainedModel, path: str | Path) -> str:
    payload = {
        "algorithm": model.algorithm,
        "spec": model.spec.to_dict(),
        "classes": [c.value for c in model.classes],
        "dimension": model.dimension,
        "vocab_sha256": model.vocab_checksum,
        "params": model.params_payload(),
    }
    return save_artifact(path, MODEL_FORMAT, payload)


def load_model(path: str | Path) -> TrainedModel:
    payload = load_artifact(path, MODEL_FORMAT)
    try:
        spec = ClassifierSpec.from_dict(payload["spec"])
        classes = tuple(FailureClass.from_name(c) for c in payload["classes"])
        dimension = int(payload["dimension"])
        checksum = payload.get("vocab_sha256")
        params = payload["params"]
        algo = payload["algorithm"]
        if algo == "linear_svm":
            return LinearSvmModel(spec, classes, dimension,
                                  params["weights"], params["bias"], checksum)
        if algo == "knn":
            return KnnModel(spec, classes, dimension,
                            params["train_matrix"], params["train_labels"], checksum)
        if algo == "random_forest":
            roots = [TreeNode.from_dict(t) for t in params["trees"]]
            return RandomForestModel(spec, classes, dimension, roots, checksum)
        if algo == "gradient_boosting":
            stages = [[TreeNode.from_dict(t) for t in stage] for stage in params["stages"]]
            return GradientBoostingModel(spec, classes, dimension, params["base_scores"],
                                         stages, params["training_deviance"], checksum)
        if algo == "mlp":
            return MlpModel(spec, classes, dimension, MlpNetwork(params), checksum)
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactCorruptError(f"{path}: malformed model payload: {exc}") from exc
    raise ArtifactCorruptError(f"{path}: unknown algorithm {payload['algorithm']!r}")


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _friedman_dict(result: FriedmanResult | None) -> dict | None:
    if result is None:
        return None
    return {
        "q_statistic": result.q_statistic,
        "p_value": result.p_value,
        "mean_ranks": list(result.mean_ranks),
        "tie_correction": result.tie_correction,
        "fully_tied": result.fully_tied,
    }


def _nemenyi_dict(result: NemenyiResult | None) -> dict | None:
    if result is None:
        return None
    return {
        "p_matrix": [[float(v) for v in row] for row in result.p_matrix],
        "critical_difference": float(result.critical_difference),
        "mean_ranks": list(result.mean_ranks),
    }


def report_scores_dict(report: ComparisonReport) -> dict:
    """The deterministic part of a report: scores and statistics, no timing."""
    return {
        "algorithms": list(report.algorithms),
        "k": report.k,
        "seed": report.seed,
        "config": report.config_echo,
        "accuracy_matrix": [[float(v) for v in row] for row in report.accuracy_matrix],
        "f1_matrix": [[float(v) for v in row] for row in report.f1_matrix],
        "mean_accuracy": [float(v) for v in report.mean_accuracy],
        "mean_f1": [float(v) for v in report.mean_f1],
        "friedman_accuracy": _friedman_dict(report.friedman_accuracy),
        "friedman_f1": _friedman_dict(report.friedman_f1),
        "nemenyi_accuracy": _nemenyi_dict(report.nemenyi_accuracy),
        "nemenyi_f1": _nemenyi_dict(report.nemenyi_f1),
    }


def report_full_dict(report: ComparisonReport) -> dict:
    """Scores plus the timing and environment fields (non-deterministic)."""
    out = report_scores_dict(report)
    out["timing"] = {
        "train_seconds": [[float(v) for v in row] for row in report.train_seconds],
        "predict_seconds": [[float(v) for v in row] for row in report.predict_seconds],
        "mean_train_seconds": [float(v) for v in report.mean_train_seconds],
        "mean_predict_seconds": [float(v) for v in report.mean_predict_seconds],
        "mean_train_minutes": [float(v) / 60.0 for v in report.mean_train_seconds],
        "mean_predict_minutes": [float(v) / 60.0 for v in report.mean_predict_seconds],
    }
    out["environment"] = report.environment
    return out


def save_report(report: ComparisonReport, path: str | Path) -> str:
    return save_artifact(path, REPORT_FORMAT, report_full_dict(report))


def load_report(path: str | Path) -> ComparisonReport:
    payload = load_artifact(path, REPORT_FORMAT)
    try:
        fr_acc = payload["friedman_accuracy"]
        fr_f1 = payload["friedman_f1"]
        ne_acc = payload["nemenyi_accuracy"]
        ne_f1 = payload["nemenyi_f1"]
        return ComparisonReport(
            algorithms=tuple(payload["algorithms"]),
            k=int(payload["k"]),
            seed=int(payload["seed"]),
            accuracy_matrix=np.array(payload["accuracy_matrix"], dtype=float),
            f1_matrix=np.array(payload["f1_matrix"], dtype=float),
            train_seconds=np.array(payload["timing"]["train_seconds"], dtype=float),
            predict_seconds=np.array(payload["timing"]["predict_seconds"], dtype=float),
            friedman_accuracy=None if fr_acc is None else FriedmanResult(
                fr_acc["q_statistic"], fr_acc["p_value"], tuple(fr_acc["mean_ranks"]),
                fr_acc["tie_correction"], fr_acc["fully_tied"]),
            friedman_f1=None if fr_f1 is None else FriedmanResult(
                fr_f1["q_statistic"], fr_f1["p_value"], tuple(fr_f1["mean_ranks"]),
                fr_f1["tie_correction"], fr_f1["fully_tied"]),
            nemenyi_accuracy=None if ne_acc is None else NemenyiResult(
                np.array(ne_acc["p_matrix"], dtype=float),
                ne_acc["critical_difference"], tuple(ne_acc["mean_ranks"])),
            nemenyi_f1=None if ne_f1 is None else NemenyiResult(
                np.array(ne_f1["p_matrix"], dtype=float),
                ne_f1["critical_difference"], tuple(ne_f1["mean_ranks"])),
            environment=payload.get("environment", ""),
            config_echo=payload.get("config", {}),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactCorruptError(f"{path}: malformed report payload: {exc}") from exc
