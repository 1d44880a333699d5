"""Rendered report output: table shapes, precision, flagging."""

import json
import re

import numpy as np

from logtriage.evaluation import ComparisonReport
from logtriage.report import render_csv, render_json, render_scores_json, render_tables
from logtriage.stats import ScoreMatrix, friedman_test, nemenyi_pairwise
from logtriage.store import report_full_dict


def build_report(accuracy, f1, train_s=None, predict_s=None, algorithms=("knn", "linear_svm", "mlp")):
    accuracy = np.asarray(accuracy, dtype=float)
    f1 = np.asarray(f1, dtype=float)
    k, n_algos = accuracy.shape
    train_s = np.asarray(train_s if train_s is not None else np.full((k, n_algos), 0.5))
    predict_s = np.asarray(predict_s if predict_s is not None else np.full((k, n_algos), 0.01))
    acc_m = ScoreMatrix(accuracy, algorithms)
    f1_m = ScoreMatrix(f1, algorithms)
    return ComparisonReport(
        algorithms=tuple(algorithms),
        k=k,
        seed=0,
        accuracy_matrix=accuracy,
        f1_matrix=f1,
        train_seconds=train_s,
        predict_seconds=predict_s,
        friedman_accuracy=friedman_test(acc_m),
        friedman_f1=friedman_test(f1_m),
        nemenyi_accuracy=nemenyi_pairwise(acc_m),
        nemenyi_f1=nemenyi_pairwise(f1_m),
        environment="test environment",
        config_echo={"k": k},
    )


class TestTables:
    def test_four_decimal_scores(self):
        report = build_report(
            accuracy=np.full((4, 3), 0.7279),
            f1=np.full((4, 3), 0.71055),
        )
        text = render_tables(report)
        assert "0.7279" in text
        assert "0.7106" in text  # rounded to table precision

    def test_equal_columns_render_unflagged_ones(self):
        report = build_report(accuracy=np.full((4, 3), 0.5), f1=np.full((4, 3), 0.5))
        text = render_tables(report)
        assert "1.0000" in text
        assert not re.search(r"\d\*", text)  # no flagged cells anywhere

    def test_flag_marks_small_p_values(self):
        accuracy = np.tile([0.9, 0.5, 0.1], (10, 1))  # perfectly ordered, tiny p
        report = build_report(accuracy=accuracy, f1=accuracy)
        text = render_tables(report)
        assert re.search(r"\d\*", text)

    def test_all_four_tables_present(self):
        report = build_report(accuracy=np.full((3, 3), 0.4), f1=np.full((3, 3), 0.4))
        text = render_tables(report)
        assert "Mean accuracy and weighted F1 per algorithm" in text
        assert "Pairwise p-values (accuracy)" in text
        assert "Pairwise p-values (weighted F1)" in text
        assert "Training and prediction time" in text
        assert "Environment: test environment" in text

    def test_minutes_conversion(self):
        report = build_report(
            accuracy=np.full((2, 3), 0.5), f1=np.full((2, 3), 0.5),
            train_s=np.full((2, 3), 66.0), predict_s=np.full((2, 3), 6.0),
        )
        text = render_tables(report)
        assert "1.100" in text  # 66 s in minutes
        assert "0.100" in text  # 6 s in minutes

    def test_display_names(self):
        report = build_report(accuracy=np.full((2, 3), 0.5), f1=np.full((2, 3), 0.5))
        text = render_tables(report)
        assert "KNN" in text and "SVM" in text and "MLP" in text


class TestMachineRenderings:
    def test_json_round_trip_equals_report_dict(self):
        report = build_report(accuracy=np.full((3, 3), 0.25), f1=np.full((3, 3), 0.25))
        parsed = json.loads(render_json(report))
        assert parsed == report_full_dict(report)

    def test_scores_json_excludes_timing(self):
        report = build_report(accuracy=np.full((3, 3), 0.25), f1=np.full((3, 3), 0.25))
        scores = json.loads(render_scores_json(report))
        assert "timing" not in scores
        assert "environment" not in scores
        assert scores["accuracy_matrix"] == [[0.25] * 3] * 3

    def test_csv_full_precision(self):
        value = 1 / 3
        report = build_report(accuracy=np.full((2, 3), value), f1=np.full((2, 3), value))
        lines = render_csv(report).splitlines()
        assert lines[0] == "algorithm,fold,accuracy,weighted_f1,train_seconds,predict_seconds"
        cell = lines[1].split(",")[2]
        assert float(cell) == value  # repr round trip, no precision loss
