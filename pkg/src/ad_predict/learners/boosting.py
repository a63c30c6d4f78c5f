"""Gradient boosting with binary logistic loss."""

from __future__ import annotations

import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ad_predict.config import GbParams
from ad_predict.learners.base import check_trainable, sigmoid
from ad_predict.learners.trees import TreeModel, grow_regression_tree
from ad_predict.logging_config import StructuredLogger
from ad_predict.models import Dataset, FeatureVector, pattern_matrix

logger = StructuredLogger(__name__)


class GbModel(BaseModel):
    """Additive model F(x) = base_score + learning_rate * sum of stage outputs."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["gb"] = "gb"
    n_stages: int = Field(ge=1)
    learning_rate: float = Field(gt=0.0, le=1.0)
    max_depth: int = Field(ge=1)
    seed: int = Field(ge=0)
    base_score: float
    stages: list[TreeModel] = Field(default_factory=list)
    train_loss: list[float] = Field(default_factory=list)  # after base, then after each stage

    def decision(self, bits: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(bits).tolist()
        out = np.full(len(rows), self.base_score, dtype=np.float64)
        for tree in self.stages:
            out += self.learning_rate * np.array([tree.output(r) for r in rows], dtype=np.float64)
        return out

    def predict_bits(self, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Label 1 iff sigmoid(F) > 0.5, i.e. F > 0; score is sigmoid(F)."""
        f = self.decision(bits)
        return (f > 0).astype(np.int64), sigmoid(f)

    def predict_one(self, fv: FeatureVector) -> tuple[int, float]:
        labels, scores = self.predict_bits(np.array(fv.as_tuple()))
        return int(labels[0]), float(scores[0])

    def predict_table(self) -> tuple[np.ndarray, np.ndarray]:
        return self.predict_bits(pattern_matrix())


def logistic_loss(y: np.ndarray, f: np.ndarray) -> float:
    """Mean binary log loss of raw scores f."""
    # log(1 + exp(f)) - y * f, computed stably
    return float(np.mean(np.logaddexp(0.0, f) - y * f))


def train_gb(
    data: Dataset,
    params: GbParams | None = None,
    seed: int = 0,
    stage_limit: int | None = None,
) -> GbModel:
    """Fit `n_stages` depth-limited regression trees to the logistic residuals.

    `stage_limit` caps the number of fitted stages (0 gives the base score only).

    Raises:
        TrainingError: only one class present
    """
    params = params or GbParams()
    x, y = check_trainable(data, "gb")
    yf = y.astype(np.float64)

    rate = float(yf.mean())
    base_score = math.log(rate / (1.0 - rate))
    f = np.full(len(y), base_score, dtype=np.float64)
    losses = [logistic_loss(yf, f)]

    n_stages = params.n_stages if stage_limit is None else min(stage_limit, params.n_stages)
    stages: list[TreeModel] = []
    for _ in range(n_stages):
        p = sigmoid(f)
        tree = grow_regression_tree(x, yf - p, p * (1.0 - p), params.max_depth)
        stages.append(tree)
        table = tree.output_table()
        f = f + params.learning_rate * table[_codes(x)]
        losses.append(logistic_loss(yf, f))

    logger.debug(
        "Gradient boosting trained",
        stage="learners",
        rows=len(y),
        stages=len(stages),
        final_loss=losses[-1],
    )
    return GbModel(
        n_stages=params.n_stages,
        learning_rate=params.learning_rate,
        max_depth=params.max_depth,
        seed=seed,
        base_score=base_score,
        stages=stages,
        train_loss=losses,
    )


def _codes(x: np.ndarray) -> np.ndarray:
    weights = 1 << np.arange(x.shape[1] - 1, -1, -1)
    return (x.astype(np.int64) * weights).sum(axis=1)
