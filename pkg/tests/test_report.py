"""Tests for report rendering and report files."""

import csv
import io

import pytest

from ad_predict.evaluation.harness import EvalReport, Protocol
from ad_predict.evaluation.metrics import compute_metrics
from ad_predict.evaluation.report import plot_csv, render_report, results_csv, write_reports


@pytest.fixture
def report():
    return EvalReport(
        protocol=Protocol(kind="holdout", train_fraction=0.8),
        seed=42,
        rows=100,
        results={
            "mnb": compute_metrics([1, 0, 0, 0], [1, 1, 0, 0]),
            "rf": compute_metrics([1, 1, 0, 0], [1, 1, 0, 0]),
            "gb": compute_metrics([1, 1, 1, 0], [1, 1, 0, 0]),
            "ensemble": compute_metrics([1, 1, 0, 1], [1, 1, 0, 0]),
        },
    )


def test_text_report_shape(report):
    """Test four accuracy rows with reference values and the ensemble F-score."""
    text = render_report(report)

    assert text.startswith("Classification accuracy (holdout-80/20, seed 42, 100 users)")
    assert "Naive Bayes" in text
    assert "75.00" in text and "77.89" in text
    assert "100.00" in text and "81.04" in text
    assert "Ensemble F-score (%): 80.00 (reference 79.68)" in text
    assert text.endswith("\n")


def test_results_csv(report):
    """Test the machine-readable results header and rows."""
    rows = list(csv.reader(io.StringIO(results_csv(report))))

    assert rows[0] == ["classifier", "protocol", "accuracy", "precision", "recall", "f1", "seed"]
    assert [r[0] for r in rows[1:]] == ["mnb", "rf", "gb", "ensemble"]
    assert rows[1] == ["mnb", "holdout-80/20", "0.750000", "1.000000", "0.500000", "0.666667", "42"]


def test_plot_csv_is_long_format(report):
    """Test one row per classifier and metric."""
    rows = list(csv.reader(io.StringIO(plot_csv(report))))

    assert rows[0] == ["classifier", "metric", "value"]
    assert len(rows) == 1 + 4 * 4
    assert ["rf", "accuracy", "1.000000"] in rows


def test_write_reports_is_byte_stable(tmp_path, report):
    """Test that writing the same report twice gives identical files."""
    first = write_reports(report, tmp_path / "a")
    second = write_reports(report, tmp_path / "b")

    assert set(first) == {"report", "results", "plot"}
    assert first["results"].name == "evaluation.csv"
    assert first["plot"].name == "evaluation_plot.csv"
    for kind in first:
        assert first[kind].read_bytes() == second[kind].read_bytes()
