"""k-nearest-neighbors with Euclidean distance.

Distance ties break toward the lower training-row index. The score is the
fraction of the k nearest neighbors labeled security; the predicted label
is security when that fraction exceeds one half.
"""

from __future__ import annotations

import numpy as np

from .base import LearnerError


class KNNState:
    def __init__(self, X, y, k: int):
        self.X = np.asarray(X, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.int64)
        self.k = k

    def predict_batch(self, X: np.ndarray):
        scores = np.empty(len(X))
        for i, row in enumerate(X):
            diff = self.X - row
            distances = (diff * diff).sum(axis=1)
            nearest = np.argsort(distances, kind="stable")[: self.k]
            scores[i] = self.y[nearest].mean()
        return (scores > 0.5).astype(np.int64), scores

    def to_dict(self) -> dict:
        return {"X": self.X.tolist(), "y": self.y.tolist(), "k": self.k}

    @classmethod
    def from_dict(cls, data: dict) -> "KNNState":
        return cls(data["X"], data["y"], data["k"])


def train_knn(spec, X: np.ndarray, y: np.ndarray) -> KNNState:
    k = spec["k"]
    if k > len(y):
        raise LearnerError(f"knn: k={k} exceeds the {len(y)} training rows")
    return KNNState(X, y, k)
