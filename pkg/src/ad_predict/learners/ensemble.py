"""Hard majority vote over naive Bayes, random forest and gradient boosting."""

from __future__ import annotations

from collections.abc import Sequence
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

from ad_predict.config import LearnerParams
from ad_predict.errors import ContractError
from ad_predict.learners.boosting import GbModel, train_gb
from ad_predict.learners.forest import RfModel, train_rf
from ad_predict.learners.naive_bayes import MnbModel, train_mnb
from ad_predict.logging_config import StructuredLogger
from ad_predict.models import Dataset, FeatureVector, pattern_matrix

logger = StructuredLogger(__name__)

MEMBERS = ("mnb", "rf", "gb")


class EnsembleModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["ensemble"] = "ensemble"
    mnb: MnbModel
    rf: RfModel
    gb: GbModel

    def member_labels(self, bits: np.ndarray) -> np.ndarray:
        """(n, 3) member labels in MEMBERS order."""
        return np.column_stack([getattr(self, name).predict_bits(bits)[0] for name in MEMBERS])

    def predict_bits(self, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Majority label and the fraction of members voting 1."""
        votes = self.member_labels(bits).sum(axis=1)
        return (votes >= 2).astype(np.int64), votes / len(MEMBERS)

    def predict_one(self, fv: FeatureVector) -> tuple[int, float]:
        labels, scores = self.predict_bits(np.array(fv.as_tuple()))
        return int(labels[0]), float(scores[0])

    def predict_table(self) -> tuple[np.ndarray, np.ndarray]:
        return self.predict_bits(pattern_matrix())


def majority_vote(labels: Sequence[int]) -> int:
    """The label given at least twice among exactly three binary labels.

    Raises:
        ContractError: not exactly three labels, or a label outside {0, 1}
    """
    if len(labels) != 3:
        raise ContractError(f"majority_vote takes exactly 3 labels, got {len(labels)}")
    if any(label not in (0, 1) for label in labels):
        raise ContractError(f"labels must be 0 or 1, got {list(labels)}")
    return 1 if sum(labels) >= 2 else 0


def train_ensemble(data: Dataset, params: LearnerParams | None = None, seed: int = 0) -> EnsembleModel:
    """Train all three members on the same data and seed."""
    params = params or LearnerParams()
    model = EnsembleModel(
        mnb=train_mnb(data, params.mnb),
        rf=train_rf(data, params.rf, seed),
        gb=train_gb(data, params.gb, seed),
    )
    logger.info("Ensemble trained", stage="learners", rows=len(data), seed=seed)
    return model


def predict_ensemble(model: EnsembleModel, fv: FeatureVector) -> int:
    labels = [getattr(model, name).predict_one(fv)[0] for name in MEMBERS]
    return majority_vote(labels)
