"""Classifiers over the 5-bit feature space and their model files."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ad_predict.learners.boosting import GbModel, train_gb
from ad_predict.learners.ensemble import EnsembleModel, majority_vote, predict_ensemble, train_ensemble
from ad_predict.learners.forest import RfModel, train_rf
from ad_predict.learners.naive_bayes import MnbModel, train_mnb
from ad_predict.learners.persistence import load_model, save_model
from ad_predict.models import FeatureVector

Model = MnbModel | RfModel | GbModel | EnsembleModel

__all__ = [
    "EnsembleModel",
    "GbModel",
    "MnbModel",
    "Model",
    "RfModel",
    "load_model",
    "majority_vote",
    "predict",
    "predict_codes",
    "predict_ensemble",
    "save_model",
    "train_ensemble",
    "train_gb",
    "train_mnb",
    "train_rf",
]


def predict(model: Model, fv: FeatureVector) -> tuple[int, float]:
    """(label, score) for one feature vector.

    Score is the class-1 posterior (MNB), the fraction of trees voting 1 (RF),
    sigmoid of the boosted score (GB) or the fraction of members voting 1
    (ensemble). Ties always go to label 0.
    """
    return model.predict_one(fv)


def predict_codes(model: Model, codes: Sequence[int] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Labels and scores for many feature codes, via the model's 32-point table."""
    labels, scores = model.predict_table()
    index = np.asarray(codes, dtype=np.int64)
    return labels[index], scores[index]
