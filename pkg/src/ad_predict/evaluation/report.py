"""Evaluation report rendering: text table, results CSV and plot-ready CSV.

None of the outputs carry timestamps, so the same report always renders to the
same bytes.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from ad_predict.evaluation.harness import CLASSIFIERS, EvalReport
from ad_predict.evaluation.metrics import METRIC_NAMES

DISPLAY_NAMES = {
    "mnb": "Naive Bayes",
    "rf": "Random Forest",
    "gb": "Gradient Boosting",
    "ensemble": "Ensemble (majority vote)",
}

# Published accuracy (%) of each classifier on the original 100-user corpus,
# and the published ensemble F-score. Shown for comparison only.
REFERENCE_ACCURACY = {"mnb": 77.89, "rf": 81.04, "gb": 79.12, "ensemble": 85.09}
REFERENCE_ENSEMBLE_F1 = 79.68

RESULTS_HEADER = ("classifier", "protocol", "accuracy", "precision", "recall", "f1", "seed")
PLOT_HEADER = ("classifier", "metric", "value")


def render_report(report: EvalReport) -> str:
    """Accuracy per classifier plus the ensemble F-score, as a text table."""
    width = max(len(name) for name in DISPLAY_NAMES.values())
    lines = [
        f"Classification accuracy ({report.protocol.describe()}, seed {report.seed}, "
        f"{report.rows} users)",
        "",
        f"{'Classifier':<{width}}  {'Accuracy (%)':>12}  {'Reference (%)':>13}",
        f"{'-' * width}  {'-' * 12}  {'-' * 13}",
    ]
    for name in CLASSIFIERS:
        accuracy = report.results[name].accuracy * 100
        lines.append(
            f"{DISPLAY_NAMES[name]:<{width}}  {accuracy:>12.2f}  {REFERENCE_ACCURACY[name]:>13.2f}"
        )
    ensemble_f1 = report.results["ensemble"].f1 * 100
    lines += [
        "",
        f"Ensemble F-score (%): {ensemble_f1:.2f} (reference {REFERENCE_ENSEMBLE_F1:.2f})",
        "Reference values come from the original, unreleased corpus and are not expected to match.",
    ]
    return "\n".join(lines) + "\n"


def _csv_text(header: tuple[str, ...], rows: list[tuple[object, ...]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def results_csv(report: EvalReport) -> str:
    """`classifier,protocol,accuracy,precision,recall,f1,seed`, one row per classifier."""
    rows: list[tuple[object, ...]] = []
    for name in CLASSIFIERS:
        scores = report.results[name]
        rows.append((
            name,
            report.protocol.describe(),
            *(f"{getattr(scores, metric):.6f}" for metric in METRIC_NAMES),
            report.seed,
        ))
    return _csv_text(RESULTS_HEADER, rows)


def plot_csv(report: EvalReport) -> str:
    """Long-format `classifier,metric,value` table for plotting."""
    rows: list[tuple[object, ...]] = [
        (name, metric, f"{getattr(report.results[name], metric):.6f}")
        for name in CLASSIFIERS
        for metric in METRIC_NAMES
    ]
    return _csv_text(PLOT_HEADER, rows)


def write_reports(report: EvalReport, report_dir: Path, stem: str = "evaluation") -> dict[str, Path]:
    """Write the text report and both CSV files; returns their paths by kind."""
    report_dir.mkdir(parents=True, exist_ok=True)
    outputs = {
        "report": (report_dir / f"{stem}.txt", render_report(report)),
        "results": (report_dir / f"{stem}.csv", results_csv(report)),
        "plot": (report_dir / f"{stem}_plot.csv", plot_csv(report)),
    }
    for path, text in outputs.values():
        path.write_text(text, encoding="utf-8")
    return {kind: path for kind, (path, _) in outputs.items()}
