"""Regression tree, GBM, and forest behavior, including the
hand-enumerated split cases and the monotone-loss guarantees."""

import numpy as np
import pytest

from remitwatch.errors import DimensionMismatch, NonFiniteInput, SingleClassInput
from remitwatch.mlcore import (
    ForestConfig,
    GbmConfig,
    GbmModel,
    RegressionTree,
    TreeConfig,
    log_loss,
    train_forest,
    train_gbm,
    train_tree,
)


class TestTree:
    def test_constant_targets_single_leaf(self):
        X = np.arange(20.0).reshape(-1, 1)
        tree = train_tree(X, np.full(20, 7.5))
        assert tree.n_nodes == 1
        assert tree.predict(X)[0] == 7.5

    def test_two_value_split(self):
        X = np.array([[0.0], [0.0], [1.0], [1.0]])
        t = np.array([2.0, 2.0, 8.0, 8.0])
        tree = train_tree(X, t, config=TreeConfig(max_depth=3, min_samples_leaf=1))
        assert tree.n_nodes == 3
        np.testing.assert_allclose(tree.predict(X), t)
        assert tree.threshold[0] == 0.5

    def test_xor_needs_depth_two(self):
        """Slightly imbalanced XOR: hand enumeration shows the best first
        split is on either axis with positive gain, and depth 2 carves all
        four cells while depth 1 cannot."""
        X = np.array([[0, 0]] * 4 + [[0, 1]] * 2 + [[1, 0]] * 3 + [[1, 1]] * 3, dtype=float)
        y = np.array([0.0] * 4 + [1.0] * 2 + [1.0] * 3 + [0.0] * 3)
        deep = train_tree(X, y, config=TreeConfig(max_depth=2, min_samples_leaf=1))
        np.testing.assert_allclose(deep.predict(X), y)
        shallow = train_tree(X, y, config=TreeConfig(max_depth=1, min_samples_leaf=1))
        assert np.abs(shallow.predict(X) - y).max() > 0.3

    def test_min_samples_leaf_respected(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(50, 2))
        y = rng.normal(size=50)
        tree = train_tree(X, y, config=TreeConfig(max_depth=8, min_samples_leaf=10))

        def leaf_counts(node, idx):
            if tree.feature[node] < 0:
                return [len(idx)]
            mask = X[idx, tree.feature[node]] <= tree.threshold[node]
            return leaf_counts(tree.left[node], idx[mask]) + \
                leaf_counts(tree.right[node], idx[~mask])

        assert min(leaf_counts(0, np.arange(50))) >= 10

    def test_max_depth_respected(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(200, 3))
        y = rng.normal(size=200)
        tree = train_tree(X, y, config=TreeConfig(max_depth=3, min_samples_leaf=1))
        assert tree.depth() <= 3

    def test_hessian_weighted_leaf_value(self):
        # leaf = sum(w*t)/sum(w): single-leaf tree on constant feature
        X = np.zeros((4, 1))
        t = np.array([1.0, 2.0, 3.0, 4.0])
        w = np.array([1.0, 1.0, 1.0, 5.0])
        tree = train_tree(X, t, hessians=w)
        assert tree.value[0] == pytest.approx((1 + 2 + 3 + 20) / 8.0)

    def test_non_finite_rejected(self):
        with pytest.raises(NonFiniteInput):
            train_tree(np.array([[np.inf]]), np.array([1.0]))

    def test_roundtrip(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(60, 4))
        y = rng.normal(size=60)
        tree = train_tree(X, y, config=TreeConfig(max_depth=4, min_samples_leaf=2))
        back = RegressionTree.from_dict(tree.to_dict())
        np.testing.assert_array_equal(tree.predict(X), back.predict(X))


class TestGbm:
    def test_zero_rounds_predicts_base_rate(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(40, 2))
        y = np.array([1.0] * 10 + [0.0] * 30)
        model = train_gbm(X, y, GbmConfig(n_rounds=0))
        np.testing.assert_allclose(model.predict_proba_batch(X), 0.25, atol=1e-12)

    def test_more_rounds_lower_loss(self):
        rng = np.random.default_rng(4)
        X = np.vstack([rng.normal(-1, 0.3, size=(50, 1)), rng.normal(1, 0.3, size=(50, 1))])
        y = np.concatenate([np.zeros(50), np.ones(50)])
        m1 = train_gbm(X, y, GbmConfig(n_rounds=1, min_samples_leaf=5))
        m50 = train_gbm(X, y, GbmConfig(n_rounds=50, min_samples_leaf=5))
        assert log_loss(y, m50.predict_proba_batch(X)) < log_loss(y, m1.predict_proba_batch(X))

    def test_train_loss_monotone_and_last_tree_helps(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(300, 5))
        y = ((X[:, 0] > 0) ^ (X[:, 1] > 0)).astype(float)
        model = train_gbm(X, y, GbmConfig(n_rounds=200, min_samples_leaf=5, subsample=1.0))
        losses = model.train_meta["train_losses"]
        assert len(losses) == 201
        for a, b in zip(losses, losses[1:]):
            assert b <= a + 1e-12
        # removing the last tree never decreases train loss
        full = log_loss(y, model.predict_proba_batch(X))
        trimmed = GbmModel(base_score=model.base_score, trees=model.trees[:-1],
                           learning_rate=model.learning_rate)
        assert full <= log_loss(y, trimmed.predict_proba_batch(X)) + 1e-12

    def test_feature_gain_accumulates(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(200, 3))
        y = (X[:, 1] > 0).astype(float)
        model = train_gbm(X, y, GbmConfig(n_rounds=20, min_samples_leaf=5))
        assert model.feature_gain.get(1, 0.0) > 0
        assert set(model.feature_gain) <= {0, 1, 2}

    def test_single_class_rejected(self):
        with pytest.raises(SingleClassInput):
            train_gbm(np.zeros((5, 1)), np.ones(5))

    def test_subsample_deterministic(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(100, 3))
        y = (X[:, 0] > 0).astype(float)
        cfg = GbmConfig(n_rounds=10, subsample=0.6, seed=42, min_samples_leaf=3)
        a, b = train_gbm(X, y, cfg), train_gbm(X, y, cfg)
        np.testing.assert_array_equal(a.predict_proba_batch(X), b.predict_proba_batch(X))

    def test_scaling_invariance_power_of_two(self):
        """Rescaling features by powers of two rescales thresholds exactly
        and leaves predictions bitwise identical."""
        rng = np.random.default_rng(8)
        X = rng.normal(size=(150, 4))
        y = ((X[:, 0] + X[:, 2]) > 0).astype(float)
        scale = np.array([4.0, 0.5, 8.0, 2.0])
        cfg = GbmConfig(n_rounds=15, min_samples_leaf=4)
        a = train_gbm(X, y, cfg)
        b = train_gbm(X * scale, y, cfg)
        np.testing.assert_array_equal(a.predict_proba_batch(X),
                                      b.predict_proba_batch(X * scale))

    def test_roundtrip(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(80, 3))
        y = (X[:, 0] > 0).astype(float)
        model = train_gbm(X, y, GbmConfig(n_rounds=5, min_samples_leaf=3))
        back = GbmModel.from_dict(model.to_dict())
        np.testing.assert_array_equal(model.predict_proba_batch(X),
                                      back.predict_proba_batch(X))
        assert back.predict_proba(X[0]) == pytest.approx(
            model.predict_proba_batch(X[:1])[0], rel=1e-12)


class TestForest:
    def test_single_tree_equals_tree(self):
        rng = np.random.default_rng(10)
        X = rng.normal(size=(60, 2))
        y = (X[:, 0] > 0).astype(float)
        forest = train_forest(X, y, ForestConfig(n_trees=1, seed=5))
        lone = forest.trees[0]
        np.testing.assert_array_equal(forest.predict_proba_batch(X), lone.predict(X))

    def test_same_seed_identical(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(80, 3))
        y = (X[:, 1] > 0).astype(float)
        cfg = ForestConfig(n_trees=10, seed=3)
        a, b = train_forest(X, y, cfg), train_forest(X, y, cfg)
        np.testing.assert_array_equal(a.predict_proba_batch(X), b.predict_proba_batch(X))

    def test_separable_toy_accuracy(self):
        rng = np.random.default_rng(12)
        n = 150
        X = np.vstack([rng.normal(-2, 0.6, size=(n, 2)), rng.normal(2, 0.6, size=(n, 2))])
        y = np.concatenate([np.zeros(n), np.ones(n)])
        order = rng.permutation(2 * n)
        X, y = X[order], y[order]
        forest = train_forest(X[:200], y[:200], ForestConfig(n_trees=30, seed=1))
        held_x, held_y = X[200:], y[200:]
        acc = ((forest.predict_proba_batch(held_x) >= 0.5) == held_y).mean()
        assert acc >= 0.95

    def test_probability_in_unit_interval(self):
        rng = np.random.default_rng(13)
        X = rng.normal(size=(100, 4))
        y = rng.integers(0, 2, size=100).astype(float)
        y[:2] = [0, 1]
        forest = train_forest(X, y, ForestConfig(n_trees=15, seed=2))
        p = forest.predict_proba_batch(X)
        assert ((p >= 0) & (p <= 1)).all()

    def test_dimension_checks(self):
        with pytest.raises(SingleClassInput):
            train_forest(np.zeros((5, 2)), np.zeros(5))
        with pytest.raises(ValueError):
            train_forest(np.zeros((5, 2)), np.array([0, 1, 0, 1, 0]),
                         ForestConfig(n_trees=0))
