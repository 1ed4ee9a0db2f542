"""Random forest: bagged regression trees on 0/1 targets with
per-split feature subsets of size ceil(sqrt(d))."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, NonFiniteInput, SingleClassInput
from .tree import RegressionTree, TreeConfig, pack_trees, train_tree


@dataclass
class ForestConfig:
    n_trees: int = 100
    max_depth: int = 8
    min_samples_leaf: int = 1
    seed: int = 0


@dataclass
class ForestModel:
    trees: list
    n_trees: int
    seed: int
    train_meta: dict = field(default_factory=dict)

    def predict_proba_batch(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        return pack_trees(self.trees).predict_sum(X) / len(self.trees)

    def predict_proba(self, x) -> float:
        return float(np.mean([t.predict_one(x) for t in self.trees]))

    def to_dict(self) -> dict:
        return {"n_trees": self.n_trees, "seed": self.seed,
                "trees": [t.to_dict() for t in self.trees],
                "train_meta": dict(self.train_meta)}

    @classmethod
    def from_dict(cls, doc) -> "ForestModel":
        return cls(trees=[RegressionTree.from_dict(t) for t in doc["trees"]],
                   n_trees=int(doc["n_trees"]), seed=int(doc["seed"]),
                   train_meta=dict(doc.get("train_meta", {})))


def train_forest(X, y, config: ForestConfig | None = None) -> ForestModel:
    config = config or ForestConfig()
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if len(X) != len(y):
        raise DimensionMismatch("|X| must equal |y|")
    if config.n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise NonFiniteInput("training data must be finite")
    classes = set(np.unique(y))
    if not classes <= {0.0, 1.0} or len(classes) < 2:
        raise SingleClassInput("y must contain both classes, encoded 0/1")

    n, d = X.shape
    mtry = math.ceil(math.sqrt(d))
    tree_cfg = TreeConfig(max_depth=config.max_depth,
                          min_samples_leaf=config.min_samples_leaf)
    trees = []
    for i in range(config.n_trees):
        rng = np.random.default_rng([config.seed, i])
        boot = rng.integers(0, n, size=n)
        trees.append(train_tree(X[boot], y[boot], config=tree_cfg,
                                mtry=mtry, rng=rng))
    return ForestModel(trees=trees, n_trees=config.n_trees, seed=config.seed,
                       train_meta={"mtry": mtry})
