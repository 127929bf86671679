"""Linear classifier trained by stochastic gradient descent.

Supports hinge and logistic losses with L2 weight decay (the bias is not
regularized). Rows are visited in a freshly shuffled order every epoch,
drawn from the seeded generator, so training is deterministic given the
seed. The prediction score is the raw margin w.x + b.
"""

from __future__ import annotations

import math

import numpy as np


class LinearSGDState:
    def __init__(self, weights, bias: float, loss: str):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)
        self.loss = loss

    def predict_batch(self, X: np.ndarray):
        margins = X @ self.weights + self.bias
        return (margins > 0).astype(np.int64), margins

    def to_dict(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias, "loss": self.loss}

    @classmethod
    def from_dict(cls, data: dict) -> "LinearSGDState":
        return cls(data["weights"], data["bias"], data["loss"])


def train_linear_sgd(spec, X: np.ndarray, y: np.ndarray) -> LinearSGDState:
    loss = spec["loss"]
    rate = float(spec["learning_rate"])
    l2 = float(spec["l2"])
    epochs = spec["epochs"]
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed & 0xFFFF_FFFF_FFFF_FFFF]))

    signs = np.where(y == 1, 1.0, -1.0)
    w = np.zeros(X.shape[1])
    b = 0.0
    for _ in range(epochs):
        for i in rng.permutation(len(y)):
            x = X[i]
            margin = signs[i] * (x @ w + b)
            if loss == "hinge":
                if margin < 1.0:
                    w += rate * (signs[i] * x - l2 * w)
                    b += rate * signs[i]
                else:
                    w -= rate * l2 * w
            else:
                # Logistic loss gradient: -y * sigmoid(-y * f).
                g = -signs[i] / (1.0 + math.exp(min(margin, 500.0)))
                w -= rate * (g * x + l2 * w)
                b -= rate * g
    return LinearSGDState(w, b, loss)
