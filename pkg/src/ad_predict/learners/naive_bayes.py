"""Naive Bayes over the five binary features.

Under the default `bernoulli` event model every feature contributes: present
features through log P(1 | class), absent ones through the stored complement
log P(0 | class). The `multinomial` event model treats each bit as a count in
{0, 1}, so only present features contribute and an all-zero vector is decided
by the priors alone.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ad_predict.config import MnbParams
from ad_predict.learners.base import check_trainable
from ad_predict.logging_config import StructuredLogger
from ad_predict.models import N_FEATURES, Dataset, FeatureVector, pattern_matrix

logger = StructuredLogger(__name__)


class MnbModel(BaseModel):
    """Log priors and per-class, per-feature log P(1 | class) with complement."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["mnb"] = "mnb"
    alpha: float = Field(ge=0.0)
    event_model: Literal["multinomial", "bernoulli"] = "bernoulli"
    log_prior: list[float] = Field(min_length=2, max_length=2)
    log_p1: list[list[float]] = Field(min_length=2, max_length=2)
    log_p0: list[list[float]] = Field(min_length=2, max_length=2)

    def joint_log_likelihood(self, bits: np.ndarray) -> np.ndarray:
        """(n, 2) class scores for an (n, 5) bit matrix."""
        bits = np.atleast_2d(bits).astype(bool)
        scores = np.tile(np.asarray(self.log_prior, dtype=np.float64), (bits.shape[0], 1))
        for c in (0, 1):
            p1 = np.asarray(self.log_p1[c], dtype=np.float64)
            # where() keeps 0 * -inf out of the sum
            scores[:, c] += np.where(bits, p1, 0.0).sum(axis=1)
            if self.event_model == "bernoulli":
                p0 = np.asarray(self.log_p0[c], dtype=np.float64)
                scores[:, c] += np.where(bits, 0.0, p0).sum(axis=1)
        return scores

    def predict_bits(self, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Labels and normalized class-1 posteriors; posterior ties go to class 0."""
        scores = self.joint_log_likelihood(bits)
        labels = (scores[:, 1] > scores[:, 0]).astype(np.int64)
        with np.errstate(invalid="ignore"):
            norm = np.logaddexp(scores[:, 0], scores[:, 1])
            posterior = np.exp(scores[:, 1] - norm)
        # Both classes impossible: no evidence either way
        posterior = np.where(np.isfinite(norm), posterior, 0.5)
        return labels, posterior

    def predict_one(self, fv: FeatureVector) -> tuple[int, float]:
        labels, scores = self.predict_bits(np.array(fv.as_tuple()))
        return int(labels[0]), float(scores[0])

    def predict_table(self) -> tuple[np.ndarray, np.ndarray]:
        return self.predict_bits(pattern_matrix())


def train_mnb(data: Dataset, params: MnbParams | None = None) -> MnbModel:
    """Fit class priors and Laplace-smoothed feature probabilities.

    P(feature=1 | c) = (count(feature=1, c) + alpha) / (count(c) + 2 * alpha)

    Raises:
        TrainingError: only one class present
    """
    params = params or MnbParams()
    x, y = check_trainable(data, "mnb")

    log_prior: list[float] = []
    log_p1: list[list[float]] = []
    log_p0: list[list[float]] = []
    with np.errstate(divide="ignore"):
        for c in (0, 1):
            rows = x[y == c]
            n_c = rows.shape[0]
            ones = rows.sum(axis=0).astype(np.float64)
            p1 = (ones + params.alpha) / (n_c + 2.0 * params.alpha)
            log_prior.append(float(np.log(n_c / len(y))))
            log_p1.append(np.log(p1).tolist())
            log_p0.append(np.log1p(-p1).tolist())

    model = MnbModel(
        alpha=params.alpha,
        event_model=params.event_model,
        log_prior=log_prior,
        log_p1=log_p1,
        log_p0=log_p0,
    )
    logger.debug(
        "Naive Bayes trained",
        stage="learners",
        rows=len(y),
        features=N_FEATURES,
        event_model=params.event_model,
    )
    return model
