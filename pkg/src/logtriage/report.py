"""Human-readable rendering of a comparison report.

Four plain-text tables: per-algorithm accuracy/F1, the two pairwise
p-value matrices (entries under 0.05 flagged with ``*``), and training and
prediction times in minutes and seconds. Scores print with four decimals,
times in minutes with three; the machine-readable JSON and CSV forms keep
full precision.
"""

import io
import json

from .classifiers.base import DISPLAY_NAMES
from .evaluation import ComparisonReport
from .stats import FriedmanResult, NemenyiResult
from .store import report_full_dict, report_scores_dict

__all__ = ["render_tables", "render_json", "render_scores_json", "render_csv"]


def _display(name: str) -> str:
    return DISPLAY_NAMES.get(name, name)


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    def fmt(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    rule = "-" * (sum(widths) + 2 * (len(widths) - 1))
    lines = [fmt(headers), rule]
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines)


def _p_matrix_table(title: str, names: list[str], result: NemenyiResult,
                    friedman: FriedmanResult) -> str:
    headers = [""] + names
    rows = []
    for i, name in enumerate(names):
        cells = [name]
        for j in range(len(names)):
            p = result.p_matrix[i][j]
            flag = "*" if (i != j and p < 0.05) else ""
            cells.append(f"{p:.4f}{flag}")
        rows.append(cells)
    note = (
        f"Friedman Q = {friedman.q_statistic:.4f}, p = {friedman.p_value:.5f}; "
        f"Nemenyi critical difference (alpha=0.05) = {result.critical_difference:.4f}; "
        f"* marks p < 0.05"
    )
    return f"{title}\n{_table(headers, rows)}\n{note}"


def render_tables(report: ComparisonReport) -> str:
    names = [_display(a) for a in report.algorithms]
    out = io.StringIO()

    rows = [
        [names[a], f"{report.mean_accuracy[a]:.4f}", f"{report.mean_f1[a]:.4f}"]
        for a in range(len(names))
    ]
    out.write("Mean accuracy and weighted F1 per algorithm\n")
    out.write(_table(["Algorithm", "Accuracy", "F1-score"], rows))
    out.write("\n\n")

    if report.nemenyi_accuracy is not None:
        out.write(_p_matrix_table("Pairwise p-values (accuracy)", names,
                                  report.nemenyi_accuracy, report.friedman_accuracy))
        out.write("\n\n")
        out.write(_p_matrix_table("Pairwise p-values (weighted F1)", names,
                                  report.nemenyi_f1, report.friedman_f1))
        out.write("\n\n")

    rows = [
        [
            names[a],
            f"{report.mean_train_seconds[a] / 60.0:.3f}",
            f"{report.mean_predict_seconds[a] / 60.0:.3f}",
            f"{report.mean_train_seconds[a]:.3f}",
            f"{report.mean_predict_seconds[a]:.3f}",
        ]
        for a in range(len(names))
    ]
    out.write("Training and prediction time\n")
    out.write(_table(["Algorithm", "Train (min)", "Predict (min)", "Train (s)", "Predict (s)"], rows))
    out.write("\n\n")
    out.write(f"Environment: {report.environment}\n")
    return out.getvalue()


def render_json(report: ComparisonReport) -> str:
    return json.dumps(report_full_dict(report), sort_keys=True, indent=2) + "\n"


def render_scores_json(report: ComparisonReport) -> str:
    """Timing-free JSON; byte-identical across same-seed reruns."""
    return json.dumps(report_scores_dict(report), sort_keys=True, indent=2) + "\n"


def render_csv(report: ComparisonReport) -> str:
    lines = ["algorithm,fold,accuracy,weighted_f1,train_seconds,predict_seconds"]
    for r in report.fold_results():
        lines.append(
            f"{r.algorithm},{r.fold},{r.accuracy!r},{r.weighted_f1!r},"
            f"{r.train_seconds!r},{r.predict_seconds!r}"
        )
    return "\n".join(lines) + "\n"
