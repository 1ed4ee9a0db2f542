"""Time-ordered splitting, feature normalization, and the columnar
feature-matrix text format."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TooFewRecords
from .features import BINARY_FEATURES, FEATURE_NAMES, N_FEATURES

STD_FLOOR = 1e-9


@dataclass
class DatasetSplit:
    train: list
    test: list
    split_timestamp: str


def _sort_key(record):
    return (record.timestamp_epoch, record.tx_hash)


def temporal_split(records, test_fraction: float) -> DatasetSplit:
    """Hold out the latest ceil(test_fraction * n) records.

    Input order does not matter; records are sorted by (timestamp,
    tx_hash) first. When records straddling the cut share a timestamp
    the cut moves earlier so no train record is concurrent with test.
    """
    if len(records) < 2:
        raise TooFewRecords("temporal split needs at least 2 records")
    if not (0.0 < test_fraction < 1.0):
        raise ValueError("test_fraction must be in (0, 1)")
    ordered = sorted(records, key=_sort_key)
    n = len(ordered)
    n_test = int(np.ceil(test_fraction * n))
    cut = n - n_test
    while cut > 0 and ordered[cut - 1].timestamp_epoch == ordered[cut].timestamp_epoch:
        cut -= 1
    if cut == 0:
        raise TooFewRecords("all records share the boundary timestamp; cannot split")
    return DatasetSplit(
        train=ordered[:cut],
        test=ordered[cut:],
        split_timestamp=ordered[cut].timestamp,
    )


@dataclass
class NormalizerStats:
    mean: np.ndarray
    std: np.ndarray

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, doc) -> "NormalizerStats":
        return cls(mean=np.asarray(doc["mean"], dtype=np.float64),
                   std=np.asarray(doc["std"], dtype=np.float64))


def fit_normalizer(X) -> NormalizerStats:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise TooFewRecords("normalizer needs at least 2 vectors")
    mean = X.mean(axis=0)
    std = np.maximum(X.std(axis=0), STD_FLOOR)
    for idx in BINARY_FEATURES:
        mean[idx] = 0.0
        std[idx] = 1.0
    return NormalizerStats(mean=mean, std=std)


def apply_normalizer(stats: NormalizerStats, v):
    v = np.asarray(v, dtype=np.float64)
    return (v - stats.mean) / stats.std


def write_matrix(path, X, y) -> None:
    """Columnar text format: feature-name header, comma-separated rows,
    label column last (0 legit / 1 fraud)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(FEATURE_NAMES) + ",label\n")
        for row, label in zip(X, y):
            fh.write(",".join(format(v, ".17g") for v in row))
            fh.write(f",{int(label)}\n")


def read_matrix(path):
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header[:-1]) != FEATURE_NAMES or header[-1] != "label":
            raise ValueError("unexpected feature matrix header")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    X = np.array([[float(v) for v in row[:-1]] for row in rows], dtype=np.float64)
    y = np.array([float(row[-1]) for row in rows], dtype=np.float64)
    if X.size == 0:
        X = X.reshape(0, N_FEATURES)
    return X, y
