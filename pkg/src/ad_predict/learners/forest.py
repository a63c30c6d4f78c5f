"""Random forest of Gini trees grown on bootstrap samples."""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ad_predict.config import RfParams
from ad_predict.learners.base import check_trainable, make_rng
from ad_predict.learners.trees import TreeModel, grow_classification_tree
from ad_predict.logging_config import StructuredLogger
from ad_predict.models import Dataset, FeatureVector, pattern_matrix

logger = StructuredLogger(__name__)


class RfModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["rf"] = "rf"
    n_trees: int = Field(ge=1)
    features_per_split: int = Field(ge=1)
    bootstrap: bool = True
    seed: int = Field(ge=0)
    trees: list[TreeModel] = Field(min_length=1)

    def votes(self, bits: np.ndarray) -> np.ndarray:
        """Number of trees voting 1 for each row of an (n, 5) bit matrix."""
        rows = np.atleast_2d(bits).tolist()
        return np.array(
            [sum(int(tree.output(row)) for tree in self.trees) for row in rows],
            dtype=np.int64,
        )

    def predict_bits(self, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Majority of tree votes (ties to 0) and the fraction voting 1."""
        votes = self.votes(bits)
        labels = (2 * votes > len(self.trees)).astype(np.int64)
        return labels, votes / len(self.trees)

    def predict_one(self, fv: FeatureVector) -> tuple[int, float]:
        labels, scores = self.predict_bits(np.array(fv.as_tuple()))
        return int(labels[0]), float(scores[0])

    def predict_table(self) -> tuple[np.ndarray, np.ndarray]:
        return self.predict_bits(pattern_matrix())


def train_rf(data: Dataset, params: RfParams | None = None, seed: int = 0) -> RfModel:
    """Grow `n_trees` trees, each on a bootstrap sample of size |data|.

    All draws (bootstrap rows, then split candidates depth-first) come from one
    PCG64 generator seeded with `seed`, tree by tree.

    Raises:
        TrainingError: only one class present
    """
    params = params or RfParams()
    x, y = check_trainable(data, "rf")
    rng = make_rng(seed)
    n = len(y)

    trees: list[TreeModel] = []
    for _ in range(params.n_trees):
        rows = rng.integers(0, n, size=n) if params.bootstrap else np.arange(n)
        trees.append(grow_classification_tree(x[rows], y[rows], rng, params.features_per_split))

    logger.debug(
        "Random forest trained",
        stage="learners",
        rows=n,
        n_trees=params.n_trees,
        max_depth=max(t.depth for t in trees),
    )
    return RfModel(
        n_trees=params.n_trees,
        features_per_split=params.features_per_split,
        bootstrap=params.bootstrap,
        seed=seed,
        trees=trees,
    )
