"""Gradient-boosted trees for binary log-loss.

Each round fits a regression tree to the current residual y - p with
hessian weights p(1-p), which makes every leaf a Newton step. Leaf
steps are capped and, if a round would still raise the training loss,
its leaves are damped by halving until it does not: with subsample=1
the per-round training log-loss is non-increasing by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, NonFiniteInput, SingleClassInput
from .logistic import sigmoid
from .tree import RegressionTree, TreeConfig, pack_trees, train_tree

HESS_FLOOR = 1e-16
LEAF_CLIP = 4.0
P_EPS = 1e-12


@dataclass
class GbmConfig:
    n_rounds: int = 200
    learning_rate: float = 0.1
    max_depth: int = 3
    min_samples_leaf: int = 20
    subsample: float = 1.0
    min_gain: float = 0.0
    seed: int = 0


@dataclass
class GbmModel:
    base_score: float
    trees: list
    learning_rate: float
    feature_gain: dict = field(default_factory=dict)
    train_meta: dict = field(default_factory=dict)

    def decision_function(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if self.trees:
            packed = pack_trees(self.trees)
            return self.base_score + self.learning_rate * packed.predict_sum(X)
        return np.full(len(X), self.base_score)

    def predict_proba_batch(self, X) -> np.ndarray:
        return sigmoid(self.decision_function(X))

    def predict_proba(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        margin = self.base_score
        for tree in self.trees:
            margin += self.learning_rate * tree.predict_one(x)
        return float(sigmoid(margin))

    def to_dict(self) -> dict:
        return {
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "trees": [t.to_dict() for t in self.trees],
            "feature_gain": {str(k): v for k, v in self.feature_gain.items()},
            "train_meta": dict(self.train_meta),
        }

    @classmethod
    def from_dict(cls, doc) -> "GbmModel":
        return cls(
            base_score=float(doc["base_score"]),
            learning_rate=float(doc["learning_rate"]),
            trees=[RegressionTree.from_dict(t) for t in doc["trees"]],
            feature_gain={int(k): float(v) for k, v in doc.get("feature_gain", {}).items()},
            train_meta=dict(doc.get("train_meta", {})),
        )


def log_loss(y, p) -> float:
    pc = np.clip(p, P_EPS, 1.0 - P_EPS)
    return float(-np.mean(y * np.log(pc) + (1 - y) * np.log(1 - pc)))


def train_gbm(X, y, config: GbmConfig | None = None) -> GbmModel:
    config = config or GbmConfig()
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if len(X) != len(y):
        raise DimensionMismatch("|X| must equal |y|")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise NonFiniteInput("training data must be finite")
    classes = set(np.unique(y))
    if not classes <= {0.0, 1.0} or len(classes) < 2:
        raise SingleClassInput("y must contain both classes, encoded 0/1")
    if not (0.0 < config.learning_rate <= 1.0):
        raise ValueError("learning_rate must be in (0, 1]")
    if not (0.0 < config.subsample <= 1.0):
        raise ValueError("subsample must be in (0, 1]")

    n = len(y)
    rate = float(np.clip(y.mean(), P_EPS, 1 - P_EPS))
    base = float(np.log(rate / (1.0 - rate)))
    margin = np.full(n, base)
    rng = np.random.default_rng(config.seed)
    tree_cfg = TreeConfig(max_depth=config.max_depth,
                          min_samples_leaf=config.min_samples_leaf,
                          min_gain=config.min_gain)
    trees = []
    feature_gain: dict[int, float] = {}
    losses = [log_loss(y, sigmoid(margin))]
    for _ in range(config.n_rounds):
        p = sigmoid(margin)
        resid = y - p
        hess = np.maximum(p * (1.0 - p), HESS_FLOOR)
        if config.subsample < 1.0:
            take = max(1, int(config.subsample * n))
            idx = np.sort(rng.permutation(n)[:take])
        else:
            idx = slice(None)
        # Newton leaves: weighted mean of resid/hess with hessian weights
        tree = train_tree(X[idx], resid[idx] / hess[idx], hessians=hess[idx],
                          config=tree_cfg)
        np.clip(tree.value, -LEAF_CLIP, LEAF_CLIP, out=tree.value)
        step = config.learning_rate * tree.predict(X)
        if config.subsample >= 1.0:
            # guarantee monotone training loss: damp the round if needed
            prev = losses[-1]
            for _ in range(40):
                if log_loss(y, sigmoid(margin + step)) <= prev:
                    break
                tree.scale_values(0.5)
                step *= 0.5
        margin = margin + step
        losses.append(log_loss(y, sigmoid(margin)))
        trees.append(tree)
        for f, g in tree.feature_gain.items():
            feature_gain[f] = feature_gain.get(f, 0.0) + g
    return GbmModel(
        base_score=base,
        trees=trees,
        learning_rate=config.learning_rate,
        feature_gain=feature_gain,
        train_meta={"seed": config.seed, "train_losses": losses,
                    "n_rounds": config.n_rounds},
    )
