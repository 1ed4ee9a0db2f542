"""Robust per-feature anomaly scoring.

The score of a vector is the worst feature's distance from the
reference median in scaled-MAD units; the reference median itself
scores exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TooFewRecords

MAD_SCALE = 1.4826
MAD_FLOOR = 1e-9
DEFAULT_THRESHOLD = 6.0


@dataclass
class AnomalyStats:
    median: np.ndarray
    mad: np.ndarray

    def to_dict(self) -> dict:
        return {"median": self.median.tolist(), "mad": self.mad.tolist()}

    @classmethod
    def from_dict(cls, doc) -> "AnomalyStats":
        return cls(median=np.asarray(doc["median"], dtype=np.float64),
                   mad=np.asarray(doc["mad"], dtype=np.float64))


def anomaly_fit(reference) -> AnomalyStats:
    X = np.asarray(reference, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if len(X) < 10:
        raise TooFewRecords("anomaly reference needs at least 10 rows")
    median = np.median(X, axis=0)
    mad = np.median(np.abs(X - median), axis=0)
    return AnomalyStats(median=median, mad=mad)


def anomaly_score(stats: AnomalyStats, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    scaled = np.abs(x - stats.median) / (MAD_SCALE * np.maximum(stats.mad, MAD_FLOOR))
    return float(scaled.max())


def anomaly_score_batch(stats: AnomalyStats, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    scaled = np.abs(X - stats.median) / (MAD_SCALE * np.maximum(stats.mad, MAD_FLOOR))
    return scaled.max(axis=1)


def is_anomalous(stats: AnomalyStats, x, threshold: float = DEFAULT_THRESHOLD) -> bool:
    return anomaly_score(stats, x) > threshold
