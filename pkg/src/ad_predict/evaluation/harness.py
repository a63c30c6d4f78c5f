"""Holdout and k-fold evaluation of all four classifiers on identical splits."""

from __future__ import annotations

import asyncio
import time
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ad_predict.config import EvaluationConfig, LearnerParams
from ad_predict.evaluation.metrics import FoldAverage, Metrics, average_folds, compute_metrics
from ad_predict.evaluation.splits import kfold, split
from ad_predict.learners import predict_codes, train_ensemble
from ad_predict.logging_config import StructuredLogger
from ad_predict.models import Dataset

logger = StructuredLogger(__name__)

CLASSIFIERS = ("mnb", "rf", "gb", "ensemble")


class Protocol(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["holdout", "kfold"] = "kfold"
    train_fraction: float = Field(default=0.8, gt=0.0, lt=1.0)
    k: int = Field(default=10, ge=2)

    @classmethod
    def from_config(cls, config: EvaluationConfig) -> Protocol:
        return cls(kind=config.protocol, train_fraction=config.train_fraction, k=config.k)

    def describe(self) -> str:
        if self.kind == "holdout":
            train = round(self.train_fraction * 100)
            return f"holdout-{train}/{100 - train}"
        return f"{self.k}-fold"


class EvalReport(BaseModel):
    """Per-classifier results of one protocol run.

    `results` holds Metrics for holdout and FoldAverage for k-fold; `folds`
    keeps the per-fold Metrics of each classifier in fold order.
    """
    model_config = ConfigDict(frozen=True)

    protocol: Protocol
    seed: int
    rows: int
    results: dict[str, Metrics | FoldAverage]
    folds: dict[str, list[Metrics]] = Field(default_factory=dict)


def score_split(
    train: Dataset, test: Dataset, params: LearnerParams, seed: int
) -> dict[str, Metrics]:
    """Train the ensemble on `train` and score every classifier on `test`."""
    model = train_ensemble(train, params, seed)
    codes = test.codes()
    truth = test.labels()
    return {
        "mnb": compute_metrics(predict_codes(model.mnb, codes)[0], truth),
        "rf": compute_metrics(predict_codes(model.rf, codes)[0], truth),
        "gb": compute_metrics(predict_codes(model.gb, codes)[0], truth),
        "ensemble": compute_metrics(predict_codes(model, codes)[0], truth),
    }


async def evaluate_async(
    data: Dataset,
    protocol: Protocol,
    seed: int,
    params: LearnerParams | None = None,
    max_concurrent: int = 4,
) -> EvalReport:
    """Run the protocol; folds train in worker threads, at most `max_concurrent` at once.

    Fold i trains with seed + i; aggregation follows fold order.
    """
    params = params or LearnerParams()
    start = time.perf_counter()

    if protocol.kind == "holdout":
        train, test = split(data, protocol.train_fraction, seed)
        results = await asyncio.to_thread(score_split, train, test, params, seed)
        report = EvalReport(protocol=protocol, seed=seed, rows=len(data), results=dict(results))
    else:
        folds = kfold(data, protocol.k, seed)
        everything = np.arange(len(data))
        semaphore = asyncio.Semaphore(max_concurrent)

        async def run_fold(index: int, test_idx: np.ndarray) -> dict[str, Metrics]:
            async with semaphore:
                train_idx = np.setdiff1d(everything, test_idx)
                scored = await asyncio.to_thread(
                    score_split, data.subset(train_idx), data.subset(test_idx), params, seed + index
                )
                logger.debug(
                    f"Fold {index + 1}/{len(folds)} scored",
                    stage="evaluation",
                    ensemble_accuracy=scored["ensemble"].accuracy,
                )
                return scored

        per_fold = await asyncio.gather(*(run_fold(i, f) for i, f in enumerate(folds)))
        by_classifier = {name: [fold[name] for fold in per_fold] for name in CLASSIFIERS}
        report = EvalReport(
            protocol=protocol,
            seed=seed,
            rows=len(data),
            results={name: average_folds(m) for name, m in by_classifier.items()},
            folds=by_classifier,
        )

    logger.info(
        "Evaluation finished",
        stage="evaluation",
        protocol=protocol.describe(),
        duration_ms=round((time.perf_counter() - start) * 1000, 2),
        **{f"{name}_accuracy": round(report.results[name].accuracy, 4) for name in CLASSIFIERS},
    )
    return report


def evaluate(
    data: Dataset,
    protocol: Protocol,
    seed: int,
    params: LearnerParams | None = None,
    max_concurrent: int = 4,
) -> EvalReport:
    """Blocking wrapper around evaluate_async."""
    return asyncio.run(evaluate_async(data, protocol, seed, params, max_concurrent))
