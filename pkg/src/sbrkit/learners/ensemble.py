"""Single CART trees and averaged tree ensembles.

Ensemble members train on independent seed-derived random streams indexed
by member number, so members can be grown in any order (or in parallel)
without changing the result. Scores are the mean of per-tree leaf
security fractions.
"""

from __future__ import annotations

import math

import numpy as np

from .base import member_rng
from .tree import Tree, grow_tree


class TreeState:
    def __init__(self, tree: Tree):
        self.tree = tree

    def predict_batch(self, X: np.ndarray):
        scores = self.tree.predict_values(X)
        return (scores > 0.5).astype(np.int64), scores

    def to_dict(self) -> dict:
        return {"tree": self.tree.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "TreeState":
        return cls(Tree.from_dict(data["tree"]))


class ForestState:
    def __init__(self, trees: list[Tree]):
        self.trees = trees

    def predict_batch(self, X: np.ndarray):
        scores = np.zeros(len(X))
        for tree in self.trees:
            scores += tree.predict_values(X)
        scores /= len(self.trees)
        return (scores > 0.5).astype(np.int64), scores

    def to_dict(self) -> dict:
        return {"trees": [tree.to_dict() for tree in self.trees]}

    @classmethod
    def from_dict(cls, data: dict) -> "ForestState":
        return cls([Tree.from_dict(item) for item in data["trees"]])


def train_decision_tree(spec, X: np.ndarray, y: np.ndarray) -> TreeState:
    tree = grow_tree(X, y, max_depth=spec["max_depth"], min_leaf=spec["min_leaf"])
    return TreeState(tree)


def train_bagged_trees(spec, X: np.ndarray, y: np.ndarray) -> ForestState:
    trees = []
    for member in range(spec["n_trees"]):
        rng = member_rng(spec.seed, member)
        sample = rng.integers(0, len(y), size=len(y))
        trees.append(
            grow_tree(X[sample], y[sample], max_depth=spec["max_depth"], min_leaf=spec["min_leaf"])
        )
    return ForestState(trees)


def train_random_forest(spec, X: np.ndarray, y: np.ndarray) -> ForestState:
    subsample = max(1, math.floor(math.sqrt(X.shape[1])))
    trees = []
    for member in range(spec["n_trees"]):
        rng = member_rng(spec.seed, member)
        sample = rng.integers(0, len(y), size=len(y))
        trees.append(
            grow_tree(
                X[sample],
                y[sample],
                max_depth=spec["max_depth"],
                min_leaf=spec["min_leaf"],
                feature_subsample=subsample,
                rng=rng,
            )
        )
    return ForestState(trees)


def train_extra_trees(spec, X: np.ndarray, y: np.ndarray) -> ForestState:
    subsample = max(1, math.floor(math.sqrt(X.shape[1])))
    trees = []
    for member in range(spec["n_trees"]):
        rng = member_rng(spec.seed, member)
        trees.append(
            grow_tree(
                X,
                y,
                max_depth=spec["max_depth"],
                min_leaf=spec["min_leaf"],
                feature_subsample=subsample,
                splitter="random",
                rng=rng,
            )
        )
    return ForestState(trees)
