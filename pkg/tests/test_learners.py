"""Learner contracts: training, prediction, determinism, persistence."""

import numpy as np
import pytest

from sbrkit.features import FeatureScheme
from sbrkit.learners import (
    KINDS,
    AlgorithmSpec,
    DegenerateTrainingError,
    DimensionError,
    LabeledDataset,
    LearnerError,
    ModelFormatError,
    gini_impurity,
    load_model,
    predict,
    predict_batch,
    save_model,
    train,
)
from sbrkit.learners.linear import LinearSGDState

SCHEME = FeatureScheme.TF

# Small ensembles keep the unit suite fast; defaults are exercised in the
# acceptance suite.
FAST_PARAMS = {
    "bagged-trees": {"n_trees": 15},
    "random-forest": {"n_trees": 15},
    "extra-trees": {"n_trees": 15},
    "adaboost": {"n_rounds": 15},
    "gradient-boosting": {"n_trees": 25},
}


def spec_for(kind, seed=0, **extra):
    params = {**FAST_PARAMS.get(kind, {}), **extra}
    return AlgorithmSpec(kind, params, seed=seed)


def dataset(X, y):
    return LabeledDataset(np.asarray(X, dtype=float), np.asarray(y), SCHEME)


def blobs(n=120, d=6, gap=3.0, seed=0):
    """Linearly separable two-class data."""
    rng = np.random.default_rng(seed)
    half = n // 2
    X0 = rng.normal(-gap, 1.0, size=(half, d))
    X1 = rng.normal(+gap, 1.0, size=(n - half, d))
    X = np.vstack([X0, X1])
    y = np.array([0] * half + [1] * (n - half))
    order = rng.permutation(n)
    return X[order], y[order]


class TestGiniImpurity:
    def test_half(self):
        assert gini_impurity([1, 1, 0, 0]) == 0.5

    def test_pure(self):
        assert gini_impurity([1, 1, 1, 1]) == 0.0

    def test_three_quarters(self):
        assert gini_impurity([1, 1, 1, 0]) == 0.375

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            gini_impurity([])


class TestGaussianNB:
    def test_symmetric_means_put_threshold_at_zero(self):
        X = np.array([[-1.0], [-1.2], [-0.8], [1.0], [1.2], [0.8]])
        y = np.array([0, 0, 0, 1, 1, 1])
        model = train(spec_for("gnb"), dataset(X, y))
        assert predict(model, [-0.5])[0] == 0
        assert predict(model, [+0.5])[0] == 1

    def test_posteriors_sum_to_one(self):
        X, y = blobs(n=60, d=4, gap=1.0, seed=3)
        model = train(spec_for("gnb"), dataset(X, y))
        posteriors = model.state.posteriors(X)
        assert np.abs(posteriors.sum(axis=1) - 1.0).max() <= 1e-9

    def test_constant_features_do_not_crash(self):
        X = np.array([[1.0, 5.0], [1.0, 5.0], [1.0, 5.0], [1.0, 5.0]])
        y = np.array([0, 0, 1, 1])
        model = train(spec_for("gnb"), dataset(X, y))
        label, score = predict(model, [1.0, 5.0])
        assert np.isfinite(score)


class TestKNN:
    def test_k1_memorizes_training_rows(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(40, 5))
        y = (rng.random(40) < 0.4).astype(int)
        model = train(spec_for("knn", k=1), dataset(X, y))
        labels, scores = predict_batch(model, X)
        assert np.array_equal(labels, y)

    def test_exact_duplicate_scores_full_confidence(self):
        X = np.array([[0.0, 0.0], [5.0, 5.0], [9.0, 0.0]])
        y = np.array([1, 0, 0])
        model = train(spec_for("knn", k=1), dataset(X, y))
        label, score = predict(model, [0.0, 0.0])
        assert (label, score) == (1, 1.0)

    def test_distance_ties_prefer_lower_row_index(self):
        # Equidistant neighbors with conflicting labels: row 0 wins.
        X = np.array([[1.0], [-1.0], [10.0]])
        y = np.array([1, 0, 0])
        model = train(spec_for("knn", k=1), dataset(X, y))
        assert predict(model, [0.0])[0] == 1

    def test_k_larger_than_dataset_rejected(self):
        X, y = blobs(n=4, d=2)
        with pytest.raises(LearnerError):
            train(spec_for("knn", k=9), dataset(X, y))


class TestLinearSGD:
    def test_prediction_is_margin_sign(self):
        state = LinearSGDState(weights=[2.0, -1.0], bias=0.5, loss="hinge")
        x = np.array([[1.0, 1.0], [-1.0, 1.0]])
        labels, scores = state.predict_batch(x)
        assert scores[0] == 2.0 - 1.0 + 0.5
        assert labels[0] == 1
        assert scores[1] == -2.0 - 1.0 + 0.5
        assert labels[1] == 0

    @pytest.mark.parametrize("loss", ["hinge", "logistic"])
    def test_separable_data_fits(self, loss):
        X, y = blobs(seed=5)
        model = train(spec_for("linear-sgd", loss=loss), dataset(X, y))
        labels, _ = predict_batch(model, X)
        assert (labels == y).mean() >= 0.95


class TestDecisionTree:
    def test_perfect_fit_on_distinct_rows(self):
        # Brute-force check over random binary datasets with no duplicate
        # rows (hence no conflicting labels).
        for seed in range(5):
            rng = np.random.default_rng(seed)
            X = np.unique(rng.integers(0, 2, size=(50, 10)), axis=0).astype(float)
            y = (rng.random(len(X)) < 0.5).astype(int)
            if y.min() == y.max():
                y[0] = 1 - y[0]
            model = train(spec_for("decision-tree"), dataset(X, y))
            labels, _ = predict_batch(model, X)
            assert (labels == y).all()

    def test_xor_is_learnable(self):
        X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        y = np.array([0, 1, 1, 0])
        model = train(spec_for("decision-tree"), dataset(X, y))
        labels, _ = predict_batch(model, X)
        assert np.array_equal(labels, y)

    def test_max_depth_limits_tree(self):
        X, y = blobs(n=80, d=3, gap=0.7, seed=2)
        model = train(spec_for("decision-tree", max_depth=1), dataset(X, y))
        assert model.state.tree.node_count <= 3


class TestAdaBoost:
    def test_unanimous_stumps_give_full_vote(self):
        X, y = blobs(n=40, d=1, gap=4.0, seed=8)
        model = train(spec_for("adaboost"), dataset(X, y))
        label, score = predict(model, [10.0])
        assert label == 1
        assert score == 1.0

    def test_staged_error_bounded_when_stumps_beat_chance(self):
        # The guaranteed monotone quantity is the exponential-loss bound
        # prod 2*sqrt(e_m(1-e_m)): it shrinks every round whose weak
        # learner beats chance, and staged training error never exceeds it.
        rng = np.random.default_rng(4)
        X = rng.normal(size=(160, 4))
        y = ((X[:, 0] + 0.6 * X[:, 1] + 0.3 * rng.normal(size=160)) > 0).astype(int)
        model = train(spec_for("adaboost", n_rounds=30), dataset(X, y))
        state = model.state
        assert len(state.stumps) >= 2
        assert all(err < 0.5 for err in state.round_errors)
        bound = 1.0
        bounds = []
        for err in state.round_errors:
            bound *= 2.0 * np.sqrt(max(err, 1e-12) * (1.0 - err))
            bounds.append(bound)
        assert all(b <= a + 1e-12 for a, b in zip(bounds, bounds[1:]))
        for rounds, bound in enumerate(bounds, start=1):
            votes = state.vote_scores(X, n_rounds=rounds)
            staged = ((votes > 0.5).astype(int) != y).mean()
            assert staged <= bound + 1e-9

    def test_final_training_error_beats_first_stump(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(160, 4))
        y = ((X[:, 0] + 0.6 * X[:, 1] + 0.3 * rng.normal(size=160)) > 0).astype(int)
        model = train(spec_for("adaboost", n_rounds=30), dataset(X, y))
        state = model.state
        first = ((state.vote_scores(X, n_rounds=1) > 0.5).astype(int) != y).mean()
        final = ((state.vote_scores(X) > 0.5).astype(int) != y).mean()
        assert final <= first


class TestGradientBoosting:
    def test_fits_nonlinear_boundary(self):
        rng = np.random.default_rng(6)
        X = rng.uniform(-1, 1, size=(200, 2))
        y = ((X[:, 0] * X[:, 1]) > 0).astype(int)
        model = train(spec_for("gradient-boosting"), dataset(X, y))
        labels, _ = predict_batch(model, X)
        assert (labels == y).mean() >= 0.95

    def test_scores_are_probabilities(self):
        X, y = blobs(seed=9)
        model = train(spec_for("gradient-boosting"), dataset(X, y))
        _, scores = predict_batch(model, X)
        assert ((scores >= 0) & (scores <= 1)).all()


NON_GNB_KINDS = tuple(kind for kind in KINDS if kind != "gnb")


@pytest.mark.parametrize("kind", NON_GNB_KINDS)
def test_every_kind_fits_separable_data(kind):
    X, y = blobs(seed=1)
    model = train(spec_for(kind), dataset(X, y))
    labels, _ = predict_batch(model, X)
    assert (labels == y).mean() >= 0.95


@pytest.mark.parametrize("kind", KINDS)
def test_training_is_deterministic(kind):
    X, y = blobs(n=60, d=4, gap=1.0, seed=12)
    X_test = np.random.default_rng(0).normal(size=(20, 4))
    runs = []
    for _ in range(2):
        model = train(spec_for(kind, seed=77), dataset(X, y))
        runs.append(predict_batch(model, X_test))
    assert np.array_equal(runs[0][0], runs[1][0])
    assert np.array_equal(runs[0][1], runs[1][1])


@pytest.mark.parametrize("kind", ["gnb", "knn", "decision-tree"])
def test_row_permutation_does_not_change_predictions(kind):
    X, y = blobs(n=80, d=5, gap=1.2, seed=21)
    X_test = np.random.default_rng(1).normal(size=(25, 5))
    model_a = train(spec_for(kind), dataset(X, y))
    perm = np.random.default_rng(2).permutation(len(y))
    model_b = train(spec_for(kind), dataset(X[perm], y[perm]))
    labels_a, scores_a = predict_batch(model_a, X_test)
    labels_b, scores_b = predict_batch(model_b, X_test)
    assert np.array_equal(labels_a, labels_b)
    assert np.abs(scores_a - scores_b).max() <= 1e-12


@pytest.mark.parametrize("kind", ["linear-sgd", "bagged-trees", "random-forest", "extra-trees"])
def test_seed_controls_randomness(kind):
    # Overlapping classes: different seeds must land on different models.
    X, y = blobs(n=60, d=4, gap=0.25, seed=30)
    X_test = np.random.default_rng(8).normal(size=(40, 4))
    model_a = train(spec_for(kind, seed=1), dataset(X, y))
    model_b = train(spec_for(kind, seed=1), dataset(X, y))
    model_c = train(spec_for(kind, seed=2), dataset(X, y))
    _, scores_a = predict_batch(model_a, X_test)
    _, scores_b = predict_batch(model_b, X_test)
    _, scores_c = predict_batch(model_c, X_test)
    assert np.array_equal(scores_a, scores_b)
    assert not np.array_equal(scores_a, scores_c)


class TestErrors:
    def test_single_class_is_degenerate(self):
        X = np.ones((5, 2))
        with pytest.raises(DegenerateTrainingError):
            train(spec_for("gnb"), dataset(X, [1, 1, 1, 1, 1]))

    def test_zero_columns_rejected(self):
        X = np.empty((4, 0))
        with pytest.raises(LearnerError):
            train(spec_for("decision-tree"), dataset(X, [0, 1, 0, 1]))

    def test_dimension_mismatch_on_predict(self):
        X, y = blobs(n=20, d=3)
        model = train(spec_for("gnb"), dataset(X, y))
        with pytest.raises(DimensionError):
            predict(model, [1.0, 2.0])

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="unknown algorithm kind"):
            AlgorithmSpec("svm")

    def test_unknown_hyperparameter_rejected(self):
        with pytest.raises(ValueError, match="unknown hyperparameters"):
            AlgorithmSpec("knn", {"neighbors": 3})

    def test_out_of_range_hyperparameter_rejected(self):
        with pytest.raises(ValueError, match="n_trees"):
            AlgorithmSpec("random-forest", {"n_trees": 0})
        with pytest.raises(ValueError, match="learning_rate"):
            AlgorithmSpec("gradient-boosting", {"learning_rate": 0.0})
        with pytest.raises(ValueError, match="loss"):
            AlgorithmSpec("linear-sgd", {"loss": "squared"})

    def test_defaults_merged(self):
        spec = AlgorithmSpec("random-forest", {"n_trees": 9})
        assert spec["n_trees"] == 9
        assert spec["min_leaf"] == 1


@pytest.mark.parametrize("kind", KINDS)
def test_save_load_round_trip(kind, tmp_path):
    X, y = blobs(n=50, d=4, gap=1.0, seed=40)
    X_test = np.random.default_rng(3).normal(size=(15, 4))
    model = train(spec_for(kind, seed=5), dataset(X, y))
    path = tmp_path / f"{kind}.model.json"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.spec == model.spec
    labels_a, scores_a = predict_batch(model, X_test)
    labels_b, scores_b = predict_batch(loaded, X_test)
    assert np.array_equal(labels_a, labels_b)
    assert np.array_equal(scores_a, scores_b)


def test_load_rejects_version_mismatch(tmp_path):
    X, y = blobs(n=30, d=2)
    model = train(spec_for("gnb"), dataset(X, y))
    path = tmp_path / "m.json"
    save_model(model, path)
    blob = path.read_text().replace('"format_version": 1', '"format_version": 99')
    path.write_text(blob)
    with pytest.raises(ModelFormatError):
        load_model(path)


def test_training_meta_records_shape():
    X, y = blobs(n=24, d=3)
    model = train(spec_for("gnb"), dataset(X, y))
    assert model.training_meta["rows"] == 24
    assert model.training_meta["columns"] == 3
    assert model.training_meta["wall_time_s"] >= 0
