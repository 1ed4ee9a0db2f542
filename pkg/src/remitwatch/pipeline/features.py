"""Behavioral feature extraction.

Eleven features per transaction, computed over the sender's prior
history only (never the future): amount shape, fee load, time of day,
24h velocity and volume, corridor risk, receiver novelty, recency, a
round-amount flag, and a robust z-score of the amount against the
sender's trailing 30 transactions.
"""

from __future__ import annotations

import hashlib
import logging
import math
from collections import deque

import numpy as np

from ..errors import TimeOrderViolation
from .validate import CleanRecord

log = logging.getLogger(__name__)

FEATURE_NAMES = (
    "amount_log",
    "fee_ratio",
    "hour_sin",
    "hour_cos",
    "sender_tx_count_24h",
    "sender_amount_sum_24h_log",
    "corridor_risk",
    "new_receiver",
    "time_since_last_tx_log",
    "round_amount",
    "amount_robust_z",
)

N_FEATURES = len(FEATURE_NAMES)
BINARY_FEATURES = (7, 9)          # new_receiver, round_amount: never rescaled
WINDOW_24H = 86_400
TRAILING_Z_WINDOW = 30
MAD_SCALE = 1.4826
ROUND_UNIT_MINOR = 10_000         # 100 major units

SCHEMA_HASH = hashlib.sha256(",".join(FEATURE_NAMES).encode("utf-8")).hexdigest()


def schema_hash() -> str:
    return SCHEMA_HASH


def extract_features(record: CleanRecord, history, corridor_risk=None) -> np.ndarray:
    """Feature vector for one record given the sender's prior records
    (time-ordered). `corridor_risk` maps "SRC->DST" -> [0,1]; unknown
    corridors score 0.5.
    """
    ts = record.timestamp_epoch
    if history and history[-1].timestamp_epoch > ts:
        raise TimeOrderViolation(
            f"history ends at {history[-1].timestamp_epoch} after record at {ts}")

    v = np.empty(N_FEATURES, dtype=np.float64)
    v[0] = math.log(record.amount_minor)
    v[1] = (record.fee_minor + record.gas_fee_minor) / record.amount_minor
    angle = 2.0 * math.pi * ((ts % 86400) / 86400.0)
    v[2] = math.sin(angle)
    v[3] = math.cos(angle)

    count_24h = 0
    sum_24h = 0
    new_receiver = 1.0
    for h in history:
        if ts - h.timestamp_epoch < WINDOW_24H:
            count_24h += 1
            sum_24h += h.amount_minor
        if h.receiver_id == record.receiver_id:
            new_receiver = 0.0
    v[4] = float(count_24h)
    v[5] = math.log1p(sum_24h)

    risk = 0.5
    if corridor_risk is not None:
        key = record.corridor
        if key in corridor_risk:
            risk = corridor_risk[key]
        else:
            log.warning("unknown corridor %s: risk defaults to 0.5", key)
    v[6] = risk
    v[7] = new_receiver
    v[8] = math.log1p(ts - history[-1].timestamp_epoch) if history else 0.0
    v[9] = 1.0 if record.amount_minor % ROUND_UNIT_MINOR == 0 else 0.0

    if history:
        tail = [h.amount_minor for h in history[-TRAILING_Z_WINDOW:]]
        med = _median(tail)
        mad = _median([abs(a - med) for a in tail])
        v[10] = (record.amount_minor - med) / (MAD_SCALE * max(mad, 1.0))
    else:
        v[10] = 0.0
    return v


def _median(values) -> float:
    s = sorted(values)
    n = len(s)
    mid = n // 2
    return float(s[mid]) if n % 2 else (s[mid - 1] + s[mid]) / 2.0


class SenderWindow:
    """Rolling per-sender history window sized for feature extraction:
    keeps everything in the last 24h plus at least the trailing 30
    transactions, and the full receiver set."""

    __slots__ = ("records", "receivers")

    def __init__(self):
        self.records = deque()
        self.receivers = set()

    def view(self):
        return tuple(self.records)

    def push(self, record: CleanRecord):
        self.records.append(record)
        self.receivers.add(record.receiver_id)
        cutoff = record.timestamp_epoch - WINDOW_24H
        while (len(self.records) > TRAILING_Z_WINDOW
               and self.records[0].timestamp_epoch <= cutoff):
            self.records.popleft()


class FeatureStream:
    """Streaming extractor: feed time-ordered records, get vectors out.
    Keeps one SenderWindow per sender so each extraction is O(window)."""

    def __init__(self, corridor_risk=None):
        self.corridor_risk = corridor_risk
        self.windows: dict[str, SenderWindow] = {}

    def window_view(self, sender_id: str):
        w = self.windows.get(sender_id)
        return w.view() if w else ()

    def extract_and_push(self, record: CleanRecord) -> np.ndarray:
        w = self.windows.get(record.sender_id)
        if w is None:
            w = self.windows[record.sender_id] = SenderWindow()
        # receiver novelty uses the full seen-set, not just the window
        vec = extract_features(record, w.view(), self.corridor_risk)
        if record.receiver_id in w.receivers:
            vec[7] = 0.0
        w.push(record)
        return vec


def build_matrix(records, corridor_risk=None):
    """Featurize a time-ordered record list. Returns (X, y, hashes)."""
    stream = FeatureStream(corridor_risk)
    n = len(records)
    X = np.empty((n, N_FEATURES), dtype=np.float64)
    y = np.empty(n, dtype=np.float64)
    hashes = []
    for i, rec in enumerate(records):
        X[i] = stream.extract_and_push(rec)
        y[i] = 1.0 if rec.is_fraud else 0.0
        hashes.append(rec.tx_hash)
    return X, y, hashes
