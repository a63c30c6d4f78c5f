"""Helpers shared by the three learners."""

from __future__ import annotations

import numpy as np

from ad_predict.errors import TrainingError
from ad_predict.models import Dataset

# Generator behind every seeded draw; recorded in model files
RNG_ALGORITHM = "PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def check_trainable(data: Dataset, learner: str) -> tuple[np.ndarray, np.ndarray]:
    """Return (X, y) or raise when a class is missing."""
    n0, n1 = data.class_counts()
    if n0 == 0 or n1 == 0:
        raise TrainingError(
            "single-class data",
            learner=learner,
            rows=len(data),
            present_class=1 if n1 else 0 if n0 else None,
        )
    return data.matrix(), data.labels()


def sigmoid(x: np.ndarray | float) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))
