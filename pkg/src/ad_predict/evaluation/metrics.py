"""Accuracy, precision, recall and F1 of the positive class (label 1)."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ad_predict.errors import ContractError

METRIC_NAMES = ("accuracy", "precision", "recall", "f1")


class Scores(BaseModel):
    model_config = ConfigDict(frozen=True)

    accuracy: float = Field(ge=0.0, le=1.0)
    precision: float = Field(ge=0.0, le=1.0)
    recall: float = Field(ge=0.0, le=1.0)
    f1: float = Field(ge=0.0, le=1.0)

    def values(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


class Metrics(Scores):
    """Scores of one prediction run with its confusion counts."""
    tp: int = Field(ge=0)
    fp: int = Field(ge=0)
    fn: int = Field(ge=0)
    tn: int = Field(ge=0)


class FoldAverage(Scores):
    """Unweighted mean of per-fold scores; confusion counts are pooled over folds."""
    folds: int = Field(ge=1)
    tp: int = Field(ge=0)
    fp: int = Field(ge=0)
    fn: int = Field(ge=0)
    tn: int = Field(ge=0)


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def compute_metrics(predictions: Sequence[int] | np.ndarray, truth: Sequence[int] | np.ndarray) -> Metrics:
    """Confusion counts and derived scores; zero denominators give 0.

    Raises:
        ContractError: lengths differ or are zero
    """
    pred = np.asarray(predictions, dtype=np.int64)
    true = np.asarray(truth, dtype=np.int64)
    if pred.shape != true.shape:
        raise ContractError(f"{len(pred)} predictions for {len(true)} labels")
    if len(true) == 0:
        raise ContractError("no predictions to score")

    tp = int(np.sum((pred == 1) & (true == 1)))
    fp = int(np.sum((pred == 1) & (true == 0)))
    fn = int(np.sum((pred == 0) & (true == 1)))
    tn = int(np.sum((pred == 0) & (true == 0)))

    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Metrics(
        accuracy=(tp + tn) / len(true),
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp, fp=fp, fn=fn, tn=tn,
    )


def average_folds(per_fold: Sequence[Metrics]) -> FoldAverage:
    if not per_fold:
        raise ContractError("no folds to average")
    means = {name: float(np.mean([getattr(m, name) for m in per_fold])) for name in METRIC_NAMES}
    return FoldAverage(
        **means,
        folds=len(per_fold),
        tp=sum(m.tp for m in per_fold),
        fp=sum(m.fp for m in per_fold),
        fn=sum(m.fn for m in per_fold),
        tn=sum(m.tn for m in per_fold),
    )
