"""Binary decision trees over the five binary features.

Trees are stored as a flat node list with node 0 as the root. An internal node
tests one feature: rows with bit 0 go to `low`, rows with bit 1 go to `high`.
Since features are binary, no path tests a feature twice.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ad_predict.models import N_FEATURES, pattern_matrix

# Smallest squared-error reduction worth a regression split
MIN_REDUCTION = 1e-12
# Below this hessian sum a boosting leaf outputs 0
MIN_HESSIAN = 1e-150


class TreeNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    feature: int | None = Field(default=None, ge=0, lt=N_FEATURES)
    low: int | None = None
    high: int | None = None
    value: float = 0.0
    counts: tuple[int, int] = (0, 0)  # class counts reaching the node

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


class TreeModel(BaseModel):
    """A fitted tree; leaf `value` is a class label or a real-valued output."""
    model_config = ConfigDict(frozen=True)

    nodes: list[TreeNode] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_structure(self) -> TreeModel:
        def walk(index: int, used: frozenset[int]) -> None:
            if not 0 <= index < len(self.nodes):
                raise ValueError(f"child index {index} out of range")
            node = self.nodes[index]
            if node.is_leaf:
                return
            if node.low is None or node.high is None:
                raise ValueError(f"internal node {index} is missing a child")
            if node.feature in used:
                raise ValueError(f"feature {node.feature} tested twice on one path")
            assert node.feature is not None
            walk(node.low, used | {node.feature})
            walk(node.high, used | {node.feature})

        walk(0, frozenset())
        return self

    def leaf(self, bits: Sequence[int]) -> TreeNode:
        node = self.nodes[0]
        while node.feature is not None:
            child = node.high if bits[node.feature] else node.low
            assert child is not None
            node = self.nodes[child]
        return node

    def output(self, bits: Sequence[int]) -> float:
        return self.leaf(bits).value

    def output_table(self) -> np.ndarray:
        """Leaf value for each of the 32 feature codes."""
        return np.array([self.output(row) for row in pattern_matrix().tolist()], dtype=np.float64)

    @property
    def depth(self) -> int:
        def walk(index: int) -> int:
            node = self.nodes[index]
            if node.is_leaf:
                return 0
            assert node.low is not None and node.high is not None
            return 1 + max(walk(node.low), walk(node.high))
        return walk(0)


def gini(n0: int, n1: int) -> float:
    total = n0 + n1
    if total == 0:
        return 0.0
    p0, p1 = n0 / total, n1 / total
    return 1.0 - p0 * p0 - p1 * p1


def majority(n0: int, n1: int) -> int:
    """Majority class, ties to 0."""
    return 1 if n1 > n0 else 0


def _counts(y: np.ndarray) -> tuple[int, int]:
    n1 = int(y.sum())
    return len(y) - n1, n1


def _best_gini_split(
    x: np.ndarray, y: np.ndarray, candidates: Sequence[int]
) -> int | None:
    """Candidate with the largest Gini decrease; both children must be non-empty.

    Candidates are scanned in ascending index order, so ties go to the lowest index.
    """
    n = len(y)
    parent = gini(*_counts(y))
    best: int | None = None
    best_decrease = -np.inf
    for feature in sorted(candidates):
        mask = x[:, feature] == 1
        n_high = int(mask.sum())
        if n_high == 0 or n_high == n:
            continue
        high = _counts(y[mask])
        low = _counts(y[~mask])
        decrease = parent - (n_high / n) * gini(*high) - ((n - n_high) / n) * gini(*low)
        if decrease > best_decrease:
            best, best_decrease = feature, decrease
    return best


def grow_classification_tree(
    x: np.ndarray,
    y: np.ndarray,
    rng: np.random.Generator,
    features_per_split: int,
) -> TreeModel:
    """Grow a Gini tree until nodes are pure or every feature is used.

    At each node `features_per_split` candidates are drawn without replacement
    from the features not yet tested on the path. When no candidate separates
    the rows, the remaining unused features are tried in index order.
    """
    nodes: list[TreeNode] = []

    def build(rows: np.ndarray, used: frozenset[int]) -> int:
        index = len(nodes)
        n0, n1 = _counts(y[rows])
        nodes.append(TreeNode(value=float(majority(n0, n1)), counts=(n0, n1)))

        available = [f for f in range(N_FEATURES) if f not in used]
        if n0 == 0 or n1 == 0 or not available:
            return index

        size = min(features_per_split, len(available))
        sampled = rng.choice(np.array(available), size=size, replace=False).tolist()
        sub_x, sub_y = x[rows], y[rows]
        feature = _best_gini_split(sub_x, sub_y, sampled)
        if feature is None:
            rest = [f for f in available if f not in sampled]
            feature = _best_gini_split(sub_x, sub_y, rest)
        if feature is None:
            return index

        high_rows = rows[x[rows, feature] == 1]
        low_rows = rows[x[rows, feature] == 0]
        low = build(low_rows, used | {feature})
        high = build(high_rows, used | {feature})
        nodes[index] = nodes[index].model_copy(update={"feature": feature, "low": low, "high": high})
        return index

    build(np.arange(len(y)), frozenset())
    return TreeModel(nodes=nodes)


def grow_regression_tree(
    x: np.ndarray,
    residual: np.ndarray,
    hessian: np.ndarray,
    max_depth: int,
) -> TreeModel:
    """Least-squares tree on residuals with Newton leaf values sum(r) / sum(h).

    Splits need a positive squared-error reduction and two non-empty children;
    ties go to the lowest feature index.
    """
    nodes: list[TreeNode] = []

    def leaf_value(rows: np.ndarray) -> float:
        denominator = float(hessian[rows].sum())
        if denominator < MIN_HESSIAN:
            return 0.0
        return float(residual[rows].sum()) / denominator

    def build(rows: np.ndarray, used: frozenset[int], depth: int) -> int:
        index = len(nodes)
        nodes.append(TreeNode(value=leaf_value(rows)))
        if depth >= max_depth or len(rows) < 2:
            return index

        r = residual[rows]
        n = len(rows)
        base = float(r.sum()) ** 2 / n
        best: int | None = None
        best_gain = MIN_REDUCTION
        for feature in range(N_FEATURES):
            if feature in used:
                continue
            mask = x[rows, feature] == 1
            n_high = int(mask.sum())
            if n_high == 0 or n_high == n:
                continue
            s_high = float(r[mask].sum())
            s_low = float(r[~mask].sum())
            gain = s_high * s_high / n_high + s_low * s_low / (n - n_high) - base
            if gain > best_gain:
                best, best_gain = feature, gain
        if best is None:
            return index

        high_rows = rows[x[rows, best] == 1]
        low_rows = rows[x[rows, best] == 0]
        low = build(low_rows, used | {best}, depth + 1)
        high = build(high_rows, used | {best}, depth + 1)
        nodes[index] = nodes[index].model_copy(update={"feature": best, "low": low, "high": high})
        return index

    build(np.arange(len(residual)), frozenset(), 0)
    return TreeModel(nodes=nodes)
