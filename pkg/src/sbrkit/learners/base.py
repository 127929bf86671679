"""Shared learner plumbing: algorithm specs, trained models, errors.

Labels are binary: 1 = security, 0 = non-security. Scores returned by
prediction are real-valued with "higher means more security-like"
(a probability for probabilistic kinds, a margin for the linear kind).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ..features import FeatureScheme

KINDS = (
    "gnb",
    "knn",
    "linear-sgd",
    "decision-tree",
    "bagged-trees",
    "random-forest",
    "extra-trees",
    "adaboost",
    "gradient-boosting",
)

# Defaults mirror common toolkit behavior; every value can be overridden
# per AlgorithmSpec.
KIND_DEFAULTS: dict[str, dict[str, Any]] = {
    "gnb": {"var_smoothing": 1e-9},
    "knn": {"k": 5},
    "linear-sgd": {"loss": "hinge", "learning_rate": 0.01, "epochs": 50, "l2": 1e-4},
    "decision-tree": {"max_depth": None, "min_leaf": 1},
    "bagged-trees": {"n_trees": 100, "max_depth": None, "min_leaf": 1},
    "random-forest": {"n_trees": 100, "max_depth": None, "min_leaf": 1},
    "extra-trees": {"n_trees": 100, "max_depth": None, "min_leaf": 1},
    "adaboost": {"n_rounds": 50},
    "gradient-boosting": {"n_trees": 100, "max_depth": 3, "learning_rate": 0.1},
}


class LearnerError(Exception):
    """Base class for learner errors."""


class DegenerateTrainingError(LearnerError):
    """Training data does not contain both classes."""


class DimensionError(LearnerError):
    """Input vector length does not match the training column count."""


def _require(condition: bool, kind: str, name: str, message: str) -> None:
    if not condition:
        raise ValueError(f"{kind}: hyperparameter {name!r} {message}")


def _validate_params(kind: str, params: Mapping[str, Any]) -> None:
    for name, value in params.items():
        if name == "loss":
            _require(value in ("hinge", "logistic"), kind, name, "must be 'hinge' or 'logistic'")
        elif name in ("k", "epochs", "n_trees", "n_rounds", "min_leaf"):
            _require(isinstance(value, int) and value >= 1, kind, name, "must be an integer >= 1")
        elif name == "max_depth":
            _require(
                value is None or (isinstance(value, int) and value >= 1),
                kind, name, "must be None or an integer >= 1",
            )
        elif name == "learning_rate":
            _require(float(value) > 0, kind, name, "must be > 0")
        elif name in ("l2", "var_smoothing"):
            _require(float(value) >= 0, kind, name, "must be >= 0")


@dataclass(frozen=True)
class AlgorithmSpec:
    """A learner kind plus hyperparameters and the training seed.

    Omitted hyperparameters take the documented defaults; unknown names
    and out-of-range values are rejected.
    """

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown algorithm kind {self.kind!r} (expected one of {KINDS})")
        defaults = KIND_DEFAULTS[self.kind]
        unknown = set(self.params) - set(defaults)
        if unknown:
            raise ValueError(f"{self.kind}: unknown hyperparameters {sorted(unknown)}")
        merged = {**defaults, **dict(self.params)}
        _validate_params(self.kind, merged)
        object.__setattr__(self, "params", merged)

    def __getitem__(self, name: str) -> Any:
        return self.params[name]


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix plus binary labels (1 = security)."""

    features: np.ndarray
    labels: np.ndarray
    scheme: FeatureScheme

    def __post_init__(self):
        object.__setattr__(self, "features", np.asarray(self.features, dtype=np.float64))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=np.int64))
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-d matrix")
        if len(self.features) != len(self.labels):
            raise ValueError("row count does not match label count")
        bad = set(np.unique(self.labels)) - {0, 1}
        if bad:
            raise ValueError(f"labels must be 0/1, found {sorted(bad)}")

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_columns(self) -> int:
        return self.features.shape[1]


@dataclass
class Model:
    """A trained classifier: spec, learned state, training metadata."""

    spec: AlgorithmSpec
    state: Any
    training_meta: dict[str, Any]

    @property
    def n_columns(self) -> int:
        return self.training_meta["columns"]


def member_rng(seed: int, member: int) -> np.random.Generator:
    """Independent random stream for ensemble member `member`."""
    return np.random.default_rng(np.random.SeedSequence([seed & 0xFFFF_FFFF_FFFF_FFFF, member]))


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -500.0, 500.0)))
