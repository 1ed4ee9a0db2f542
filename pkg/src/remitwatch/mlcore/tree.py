"""Greedy CART regression trees with optional hessian weighting.

Trees are stored as flat parallel arrays (feature index -1 marks a
leaf) so batch prediction can run through the compiled kernel and
serialization is trivial. Split search maximizes weighted-SSE
reduction; targets are centered per node so a constant node scores an
exact zero gain. Ties break to the lowest feature index, then the
lowest threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import _kernels
from ..errors import NonFiniteInput


@dataclass
class TreeConfig:
    max_depth: int = 3
    min_samples_leaf: int = 1
    min_gain: float = 0.0


@dataclass
class RegressionTree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    max_depth: int
    min_samples_leaf: int
    feature_gain: dict = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def predict(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        return _kernels.predict_tree(self.feature, self.threshold, self.left,
                                     self.right, self.value, X)

    def predict_one(self, x) -> float:
        node = 0
        while self.feature[node] >= 0:
            if x[self.feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return float(self.value[node])

    def depth(self) -> int:
        def walk(node):
            if self.feature[node] < 0:
                return 0
            return 1 + max(walk(self.left[node]), walk(self.right[node]))
        return walk(0)

    def scale_values(self, factor: float) -> None:
        self.value = self.value * factor

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "feature_gain": {str(k): v for k, v in self.feature_gain.items()},
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RegressionTree":
        return cls(
            feature=np.asarray(doc["feature"], dtype=np.int32),
            threshold=np.asarray(doc["threshold"], dtype=np.float64),
            left=np.asarray(doc["left"], dtype=np.int32),
            right=np.asarray(doc["right"], dtype=np.int32),
            value=np.asarray(doc["value"], dtype=np.float64),
            max_depth=doc["max_depth"],
            min_samples_leaf=doc["min_samples_leaf"],
            feature_gain={int(k): float(v) for k, v in doc.get("feature_gain", {}).items()},
        )


@dataclass
class PackedEnsemble:
    """Trees concatenated into flat arrays with shifted child indices;
    one kernel call sums every tree's leaf value per row."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    offsets: np.ndarray

    def predict_sum(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        return _kernels.predict_forest(self.feature, self.threshold, self.left,
                                       self.right, self.value, self.offsets, X)


def pack_trees(trees) -> PackedEnsemble:
    offsets = np.zeros(len(trees) + 1, dtype=np.int32)
    for i, tree in enumerate(trees):
        offsets[i + 1] = offsets[i] + tree.n_nodes
    feature = np.concatenate([t.feature for t in trees])
    threshold = np.concatenate([t.threshold for t in trees])
    value = np.concatenate([t.value for t in trees])
    left = np.concatenate([np.where(t.left >= 0, t.left + offsets[i], t.left)
                           for i, t in enumerate(trees)]).astype(np.int32)
    right = np.concatenate([np.where(t.right >= 0, t.right + offsets[i], t.right)
                            for i, t in enumerate(trees)]).astype(np.int32)
    return PackedEnsemble(feature=feature.astype(np.int32), threshold=threshold,
                          left=left, right=right, value=value, offsets=offsets)


class _Builder:
    def __init__(self, X, t, w, config, mtry=None, rng=None, kernels=None):
        self.X = X
        self.t = t
        self.w = w
        self.config = config
        self.mtry = mtry
        self.rng = rng
        self.kernels = kernels or _kernels
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []
        self.gains: dict[int, float] = {}

    def _new_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def build(self, idx, depth) -> int:
        node = self._new_node()
        t, w = self.t[idx], self.w[idx]
        wsum = w.sum()
        wmean = float((w * t).sum() / wsum) if wsum > 0 else float(t.mean())
        self.value[node] = wmean
        cfg = self.config
        if depth >= cfg.max_depth or len(idx) < 2 * cfg.min_samples_leaf:
            return node

        d = self.X.shape[1]
        if self.mtry is not None and self.mtry < d:
            candidates = np.sort(self.rng.permutation(d)[: self.mtry])
        else:
            candidates = range(d)

        centered = t - wmean
        best_gain = -np.inf
        best_feat = -1
        best_pos = -1
        best_order = None
        for f in candidates:
            col = self.X[idx, f]
            order = np.argsort(col, kind="stable")
            gain, pos = self.kernels.scan_split(
                np.ascontiguousarray(col[order]),
                np.ascontiguousarray(centered[order]),
                np.ascontiguousarray(w[order]),
                cfg.min_samples_leaf,
            )
            if gain > best_gain:
                best_gain, best_feat, best_pos, best_order = gain, int(f), pos, order

        if best_feat < 0 or best_gain <= cfg.min_gain:
            return node

        col_sorted = self.X[idx[best_order], best_feat]
        thr = (col_sorted[best_pos] + col_sorted[best_pos + 1]) / 2.0
        left_idx = idx[best_order[: best_pos + 1]]
        right_idx = idx[best_order[best_pos + 1:]]
        self.gains[best_feat] = self.gains.get(best_feat, 0.0) + best_gain
        self.feature[node] = best_feat
        self.threshold[node] = float(thr)
        self.left[node] = self.build(left_idx, depth + 1)
        self.right[node] = self.build(right_idx, depth + 1)
        return node


def train_tree(X, targets, hessians=None, config: TreeConfig | None = None,
               mtry=None, rng=None, kernels=None) -> RegressionTree:
    """Fit one regression tree. `hessians` act as per-sample weights;
    unit weights give plain variance-reduction CART."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    t = np.asarray(targets, dtype=np.float64)
    if len(t) != len(X) or len(t) < 1:
        raise NonFiniteInput("targets must be non-empty and match X")
    if not (np.isfinite(X).all() and np.isfinite(t).all()):
        raise NonFiniteInput("X and targets must be finite")
    w = np.ones(len(t)) if hessians is None else np.asarray(hessians, dtype=np.float64)
    if not np.isfinite(w).all() or (w < 0).any():
        raise NonFiniteInput("hessians must be finite and >= 0")
    config = config or TreeConfig()
    builder = _Builder(X, t, w, config, mtry=mtry, rng=rng, kernels=kernels)
    builder.build(np.arange(len(t)), 0)
    return RegressionTree(
        feature=np.asarray(builder.feature, dtype=np.int32),
        threshold=np.asarray(builder.threshold, dtype=np.float64),
        left=np.asarray(builder.left, dtype=np.int32),
        right=np.asarray(builder.right, dtype=np.int32),
        value=np.asarray(builder.value, dtype=np.float64),
        max_depth=config.max_depth,
        min_samples_leaf=config.min_samples_leaf,
        feature_gain=builder.gains,
    )
