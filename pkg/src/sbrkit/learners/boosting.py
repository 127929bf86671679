"""Boosted tree learners: AdaBoost stumps and gradient boosting.

AdaBoost follows the discrete SAMME weighting for the binary case: round
weights alpha = ln((1 - err) / err), stopping early on a perfect or
worse-than-chance weak learner. Gradient boosting fits shallow regression
trees to the log-loss gradient with Newton-step leaf values.
"""

from __future__ import annotations

import math

import numpy as np

from .base import LearnerError, sigmoid
from .tree import Tree, grow_tree


class AdaBoostState:
    def __init__(self, stumps: list[Tree], alphas: list[float], round_errors: list[float]):
        self.stumps = stumps
        self.alphas = list(alphas)
        self.round_errors = list(round_errors)

    def vote_scores(self, X: np.ndarray, n_rounds: int | None = None) -> np.ndarray:
        """Weighted fraction of the alpha mass voting security."""
        take = len(self.stumps) if n_rounds is None else n_rounds
        votes = np.zeros(len(X))
        total = 0.0
        for stump, alpha in zip(self.stumps[:take], self.alphas[:take]):
            votes += alpha * (stump.predict_values(X) > 0.5)
            total += alpha
        return votes / total

    def predict_batch(self, X: np.ndarray):
        scores = self.vote_scores(X)
        return (scores > 0.5).astype(np.int64), scores

    def to_dict(self) -> dict:
        return {
            "stumps": [s.to_dict() for s in self.stumps],
            "alphas": self.alphas,
            "round_errors": self.round_errors,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AdaBoostState":
        return cls(
            [Tree.from_dict(item) for item in data["stumps"]],
            data["alphas"],
            data["round_errors"],
        )


def train_adaboost(spec, X: np.ndarray, y: np.ndarray) -> AdaBoostState:
    n = len(y)
    weights = np.full(n, 1.0 / n)
    stumps: list[Tree] = []
    alphas: list[float] = []
    errors: list[float] = []
    for _ in range(spec["n_rounds"]):
        stump = grow_tree(X, y, sample_weight=weights, max_depth=1)
        predicted = (stump.predict_values(X) > 0.5).astype(np.int64)
        mistakes = predicted != y
        err = float(weights[mistakes].sum())
        if err <= 0.0:
            # Perfect weak learner: give it the whole vote and stop.
            stumps.append(stump)
            alphas.append(1.0)
            errors.append(0.0)
            break
        if err >= 0.5:
            break
        alpha = math.log((1.0 - err) / err)
        stumps.append(stump)
        alphas.append(alpha)
        errors.append(err)
        weights = weights * np.exp(alpha * mistakes)
        weights /= weights.sum()
    if not stumps:
        raise LearnerError("adaboost: no weak learner beat chance on round 1")
    return AdaBoostState(stumps, alphas, errors)


class GradientBoostingState:
    def __init__(self, trees: list[Tree], base_score: float, learning_rate: float):
        self.trees = trees
        self.base_score = float(base_score)
        self.learning_rate = float(learning_rate)

    def raw_scores(self, X: np.ndarray) -> np.ndarray:
        raw = np.full(len(X), self.base_score)
        for tree in self.trees:
            raw += self.learning_rate * tree.predict_values(X)
        return raw

    def predict_batch(self, X: np.ndarray):
        scores = sigmoid(self.raw_scores(X))
        return (scores > 0.5).astype(np.int64), scores

    def to_dict(self) -> dict:
        return {
            "trees": [tree.to_dict() for tree in self.trees],
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GradientBoostingState":
        return cls(
            [Tree.from_dict(item) for item in data["trees"]],
            data["base_score"],
            data["learning_rate"],
        )


def train_gradient_boosting(spec, X: np.ndarray, y: np.ndarray) -> GradientBoostingState:
    rate = float(spec["learning_rate"])
    y = y.astype(np.float64)
    p1 = float(y.mean())
    base = math.log(p1 / (1.0 - p1))
    raw = np.full(len(y), base)
    trees: list[Tree] = []
    for _ in range(spec["n_trees"]):
        prob = sigmoid(raw)
        residual = y - prob
        tree = grow_tree(X, residual, criterion="mse", max_depth=spec["max_depth"])
        # Newton-step leaf values for the log loss.
        leaves = tree.leaf_indices(X)
        hessian = prob * (1.0 - prob)
        for leaf in np.unique(leaves):
            rows = leaves == leaf
            denominator = float(hessian[rows].sum())
            numerator = float(residual[rows].sum())
            tree.value[leaf] = numerator / denominator if denominator > 1e-150 else 0.0
        raw += rate * tree.predict_values(X)
        trees.append(tree)
    return GradientBoostingState(trees, base, rate)
