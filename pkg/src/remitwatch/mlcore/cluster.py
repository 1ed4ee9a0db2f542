"""k-means with k-means++ seeding and Lloyd iterations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import KTooLarge


@dataclass
class KMeansConfig:
    max_iters: int = 300
    tol: float = 1e-6
    seed: int = 0


@dataclass
class Clustering:
    centroids: np.ndarray
    inertia: float
    iterations: int
    inertia_history: list = field(default_factory=list)

    def assign(self, x) -> int:
        x = np.asarray(x, dtype=np.float64)
        d = ((self.centroids - x) ** 2).sum(axis=1)
        return int(np.argmin(d))

    def assign_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        d = ((X[:, None, :] - self.centroids[None, :, :]) ** 2).sum(axis=2)
        return np.argmin(d, axis=1)

    def to_dict(self) -> dict:
        return {"centroids": self.centroids.tolist(), "inertia": self.inertia,
                "iterations": self.iterations}

    @classmethod
    def from_dict(cls, doc) -> "Clustering":
        return cls(centroids=np.asarray(doc["centroids"], dtype=np.float64),
                   inertia=float(doc["inertia"]), iterations=int(doc["iterations"]))


def _plus_plus_seed(X, k, rng):
    n = len(X)
    centroids = np.empty((k, X.shape[1]))
    centroids[0] = X[rng.integers(n)]
    d2 = ((X - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            centroids[j] = X[rng.integers(n)]
            continue
        r = rng.random() * total
        idx = int(np.searchsorted(np.cumsum(d2), r))
        idx = min(idx, n - 1)
        centroids[j] = X[idx]
        d2 = np.minimum(d2, ((X - centroids[j]) ** 2).sum(axis=1))
    return centroids


def kmeans_fit(X, k, config: KMeansConfig | None = None) -> Clustering:
    config = config or KMeansConfig()
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if k < 1 or k > len(X):
        raise KTooLarge(f"k={k} with {len(X)} points")
    rng = np.random.default_rng(config.seed)
    centroids = _plus_plus_seed(X, k, rng)
    history = []
    iterations = 0
    for iterations in range(1, config.max_iters + 1):
        d = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        labels = np.argmin(d, axis=1)
        inertia = float(d[np.arange(len(X)), labels].sum())
        history.append(inertia)
        new_centroids = centroids.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                new_centroids[j] = X[members].mean(axis=0)
            else:
                # reseed an empty cluster to the point farthest from its centroid
                farthest = int(np.argmax(d[np.arange(len(X)), labels]))
                new_centroids[j] = X[farthest]
        shift = np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max()
        centroids = new_centroids
        if shift < config.tol:
            break
    d = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d, axis=1)
    final_inertia = float(d[np.arange(len(X)), labels].sum())
    history.append(final_inertia)
    return Clustering(centroids=centroids, inertia=final_inertia,
                      iterations=iterations, inertia_history=history)
