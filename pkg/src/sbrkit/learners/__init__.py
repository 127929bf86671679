"""From-scratch supervised learners behind one train/predict interface.

    spec = AlgorithmSpec("random-forest", {"n_trees": 50}, seed=7)
    model = train(spec, LabeledDataset(X, y, FeatureScheme.TFIDF))
    label, score = predict(model, x)

Training is deterministic given the spec (including its seed) and data.
Models are immutable after training and can be saved to / loaded from a
versioned JSON file.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np

from .base import (
    KIND_DEFAULTS,
    KINDS,
    AlgorithmSpec,
    DegenerateTrainingError,
    DimensionError,
    LabeledDataset,
    LearnerError,
    Model,
)
from .boosting import (
    AdaBoostState,
    GradientBoostingState,
    train_adaboost,
    train_gradient_boosting,
)
from .ensemble import (
    ForestState,
    TreeState,
    train_bagged_trees,
    train_decision_tree,
    train_extra_trees,
    train_random_forest,
)
from .linear import LinearSGDState, train_linear_sgd
from .naive_bayes import GaussianNBState, train_gnb
from .neighbors import KNNState, train_knn
from .tree import gini_impurity

__all__ = [
    "KINDS",
    "KIND_DEFAULTS",
    "AlgorithmSpec",
    "LabeledDataset",
    "Model",
    "LearnerError",
    "DegenerateTrainingError",
    "DimensionError",
    "ModelFormatError",
    "train",
    "predict",
    "predict_batch",
    "gini_impurity",
    "save_model",
    "load_model",
]

MODEL_FORMAT_VERSION = 1

_TRAINERS = {
    "gnb": train_gnb,
    "knn": train_knn,
    "linear-sgd": train_linear_sgd,
    "decision-tree": train_decision_tree,
    "bagged-trees": train_bagged_trees,
    "random-forest": train_random_forest,
    "extra-trees": train_extra_trees,
    "adaboost": train_adaboost,
    "gradient-boosting": train_gradient_boosting,
}

_STATE_TYPES = {
    "gnb": GaussianNBState,
    "knn": KNNState,
    "linear-sgd": LinearSGDState,
    "decision-tree": TreeState,
    "bagged-trees": ForestState,
    "random-forest": ForestState,
    "extra-trees": ForestState,
    "adaboost": AdaBoostState,
    "gradient-boosting": GradientBoostingState,
}


class ModelFormatError(LearnerError):
    """A persisted model file has the wrong format version."""


def train(spec: AlgorithmSpec, data: LabeledDataset) -> Model:
    """Train a model; deterministic given spec.seed and the data."""
    if data.n_columns == 0:
        raise LearnerError("training data has zero feature columns")
    classes = np.unique(data.labels)
    if len(classes) < 2:
        raise DegenerateTrainingError(
            f"training data contains a single class ({int(classes[0])})"
        )
    started = time.perf_counter()
    state = _TRAINERS[spec.kind](spec, data.features, data.labels)
    elapsed = time.perf_counter() - started
    meta = {"rows": data.n_rows, "columns": data.n_columns, "wall_time_s": elapsed}
    return Model(spec=spec, state=state, training_meta=meta)


def predict_batch(model: Model, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hard labels and security-likeness scores for a matrix of vectors."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_columns:
        raise DimensionError(
            f"expected vectors of length {model.n_columns}, got shape {X.shape}"
        )
    return model.state.predict_batch(X)


def predict(model: Model, vector) -> tuple[int, float]:
    """Hard label plus score for a single feature vector."""
    vector = np.asarray(vector, dtype=np.float64)
    if vector.ndim != 1:
        raise DimensionError(f"expected a 1-d vector, got shape {vector.shape}")
    labels, scores = predict_batch(model, vector[None, :])
    return int(labels[0]), float(scores[0])


def save_model(model: Model, path: str | Path) -> None:
    blob = {
        "format_version": MODEL_FORMAT_VERSION,
        "spec": {"kind": model.spec.kind, "params": dict(model.spec.params), "seed": model.spec.seed},
        "state": model.state.to_dict(),
        "training_meta": model.training_meta,
    }
    Path(path).write_text(json.dumps(blob), encoding="utf-8")


def load_model(path: str | Path) -> Model:
    blob = json.loads(Path(path).read_text(encoding="utf-8"))
    version = blob.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model format version {version!r} (expected {MODEL_FORMAT_VERSION})"
        )
    spec = AlgorithmSpec(**blob["spec"])
    state = _STATE_TYPES[spec.kind].from_dict(blob["state"])
    return Model(spec=spec, state=state, training_meta=blob["training_meta"])
