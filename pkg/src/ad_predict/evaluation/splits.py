"""Seeded stratified holdout split and k-fold assignment."""

from __future__ import annotations

import math

import numpy as np

from ad_predict.errors import ContractError, StratificationError
from ad_predict.learners.base import make_rng
from ad_predict.models import Dataset


def _shuffled_by_class(data: Dataset, seed: int) -> list[np.ndarray]:
    """Row indices of each class, in the order of one seeded permutation."""
    labels = data.labels()
    order = make_rng(seed).permutation(len(labels))
    return [order[labels[order] == c] for c in (0, 1)]


def split(data: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Stratified (train, test) with exactly floor(train_fraction * n) training rows.

    Each class first gets floor(train_fraction * n_c) training rows; the seats
    left over go to the classes with the largest fractional parts (class 0
    first on ties). Both sides keep the original row order.

    Raises:
        ContractError: train_fraction outside (0, 1)
        StratificationError: a class has no training row, or the test side is empty
    """
    if not 0.0 < train_fraction < 1.0:
        raise ContractError(f"train_fraction must be in (0, 1), got {train_fraction}")

    n = len(data)
    by_class = _shuffled_by_class(data, seed)
    exact = [train_fraction * len(rows) for rows in by_class]
    seats = [math.floor(e) for e in exact]
    leftover = math.floor(train_fraction * n) - sum(seats)
    for c in sorted((0, 1), key=lambda c: -(exact[c] - seats[c]))[:max(leftover, 0)]:
        seats[c] += 1

    for c, count in enumerate(seats):
        if count == 0:
            raise StratificationError(
                f"class {c} has no training row", rows=n, class_rows=len(by_class[c]),
                train_fraction=train_fraction,
            )
    if sum(seats) >= n:
        raise StratificationError("test side is empty", rows=n, train_fraction=train_fraction)

    train_idx = np.sort(np.concatenate([rows[:k] for rows, k in zip(by_class, seats, strict=True)]))
    test_idx = np.sort(np.concatenate([rows[k:] for rows, k in zip(by_class, seats, strict=True)]))
    return data.subset(train_idx), data.subset(test_idx)


def kfold(data: Dataset, k: int, seed: int) -> list[np.ndarray]:
    """k disjoint, stratified folds of row indices (each sorted) covering the data.

    The seeded per-class orders are concatenated (class 0 first) and row i of
    that sequence goes to fold i % k, so fold sizes differ by at most one.

    Raises:
        ContractError: k < 2
        StratificationError: a class has fewer than k rows
    """
    if k < 2:
        raise ContractError(f"k must be at least 2, got {k}")
    by_class = _shuffled_by_class(data, seed)
    for c, rows in enumerate(by_class):
        if len(rows) < k:
            raise StratificationError(
                f"class {c} has {len(rows)} rows, fewer than k={k}", k=k
            )
    sequence = np.concatenate(by_class)
    assignment = np.arange(len(sequence)) % k
    return [np.sort(sequence[assignment == fold]) for fold in range(k)]
