"""Gaussian Naive Bayes."""

from __future__ import annotations

import numpy as np

from .base import sigmoid


class GaussianNBState:
    """Per-class priors and per-feature Gaussian moments."""

    def __init__(self, log_prior, mean, var):
        self.log_prior = np.asarray(log_prior, dtype=np.float64)
        self.mean = np.asarray(mean, dtype=np.float64)
        self.var = np.asarray(var, dtype=np.float64)

    def _log_joint(self, X: np.ndarray) -> np.ndarray:
        log_joint = np.empty((len(X), 2))
        for cls in (0, 1):
            diff = X - self.mean[cls]
            log_joint[:, cls] = self.log_prior[cls] - 0.5 * (
                np.log(2.0 * np.pi * self.var[cls]) + diff * diff / self.var[cls]
            ).sum(axis=1)
        return log_joint

    def posteriors(self, X: np.ndarray) -> np.ndarray:
        """(n, 2) class posteriors, normalized in log space."""
        log_joint = self._log_joint(X)
        margin = log_joint[:, 1] - log_joint[:, 0]
        return np.column_stack([sigmoid(-margin), sigmoid(margin)])

    def scores(self, X: np.ndarray) -> np.ndarray:
        """Posterior probability of the security class per row."""
        return self.posteriors(X)[:, 1]

    def predict_batch(self, X: np.ndarray):
        scores = self.scores(X)
        return (scores > 0.5).astype(np.int64), scores

    def to_dict(self) -> dict:
        return {
            "log_prior": self.log_prior.tolist(),
            "mean": self.mean.tolist(),
            "var": self.var.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GaussianNBState":
        return cls(data["log_prior"], data["mean"], data["var"])


def train_gnb(spec, X: np.ndarray, y: np.ndarray) -> GaussianNBState:
    n = len(y)
    log_prior = []
    mean = []
    var = []
    for cls in (0, 1):
        rows = X[y == cls]
        log_prior.append(np.log(len(rows) / n))
        mean.append(rows.mean(axis=0))
        var.append(rows.var(axis=0))
    mean = np.vstack(mean)
    var = np.vstack(var)
    # Variance floor keyed to the largest overall feature variance; the
    # absolute fallback guards all-constant training matrices.
    floor = spec["var_smoothing"] * float(X.var(axis=0).max())
    if floor <= 0.0:
        floor = 1e-12
    return GaussianNBState(log_prior, mean, np.maximum(var, floor))
