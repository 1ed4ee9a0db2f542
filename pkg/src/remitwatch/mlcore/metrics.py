"""Classification, ranking, and regression metrics.

Degenerate denominators (no predicted positives, no actual positives,
a zero in MAPE's denominator) never raise: the value comes back 0 (or
absent for MAPE) with an explicit flag, because a monitoring batch of
all-negatives must not crash the scorer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import LengthMismatch, SingleClassInput


@dataclass
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn}


@dataclass
class MetricsReport:
    accuracy: float | None = None
    precision: float | None = None
    recall: float | None = None
    f1: float | None = None
    roc_auc: float | None = None
    pr_auc: float | None = None
    precision_degenerate: bool = False
    recall_degenerate: bool = False
    mse: float | None = None
    rmse: float | None = None
    mae: float | None = None
    mape: float | None = None
    mape_absent: bool = False
    confusion: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "roc_auc": self.roc_auc,
            "pr_auc": self.pr_auc,
            "precision_degenerate": self.precision_degenerate,
            "recall_degenerate": self.recall_degenerate,
            "mse": self.mse,
            "rmse": self.rmse,
            "mae": self.mae,
            "mape": self.mape,
            "mape_absent": self.mape_absent,
            "confusion": dict(self.confusion),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "MetricsReport":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in doc.items() if k in known})


def _as_binary(y, name):
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise LengthMismatch(f"{name} must be 1-D")
    return arr.astype(np.int64)


def classification_metrics(y_true, y_pred):
    """Counting metrics at a fixed threshold.

    Returns (ConfusionMatrix, accuracy, precision, recall, f1,
    precision_degenerate, recall_degenerate).
    """
    yt = _as_binary(y_true, "y_true")
    yp = _as_binary(y_pred, "y_pred")
    if len(yt) != len(yp):
        raise LengthMismatch(f"lengths differ: {len(yt)} vs {len(yp)}")
    if len(yt) == 0:
        raise LengthMismatch("empty input")
    tp = int(((yt == 1) & (yp == 1)).sum())
    fp = int(((yt == 0) & (yp == 1)).sum())
    tn = int(((yt == 0) & (yp == 0)).sum())
    fn = int(((yt == 1) & (yp == 0)).sum())
    cm = ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)
    accuracy = (tp + tn) / cm.total
    precision_degenerate = (tp + fp) == 0
    recall_degenerate = (tp + fn) == 0
    precision = 0.0 if precision_degenerate else tp / (tp + fp)
    recall = 0.0 if recall_degenerate else tp / (tp + fn)
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return cm, accuracy, precision, recall, f1, precision_degenerate, recall_degenerate


def roc_auc(y_true, scores) -> float:
    """Mann-Whitney pair statistic; ties count half. Equal to the area
    under the trapezoidal ROC curve."""
    yt = _as_binary(y_true, "y_true")
    s = np.asarray(scores, dtype=np.float64)
    if len(yt) != len(s):
        raise LengthMismatch(f"lengths differ: {len(yt)} vs {len(s)}")
    n_pos = int((yt == 1).sum())
    n_neg = int((yt == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise SingleClassInput("roc_auc needs both classes")
    order = np.argsort(s, kind="stable")
    ranks = np.empty(len(s), dtype=np.float64)
    sorted_scores = s[order]
    i = 0
    while i < len(s):
        j = i
        while j + 1 < len(s) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0   # average rank, 1-based
        i = j + 1
    rank_sum = ranks[yt == 1].sum()
    return float((rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def pr_auc(y_true, scores) -> float:
    """Average precision: sum of precision * recall-step over descending
    distinct score thresholds."""
    yt = _as_binary(y_true, "y_true")
    s = np.asarray(scores, dtype=np.float64)
    if len(yt) != len(s):
        raise LengthMismatch(f"lengths differ: {len(yt)} vs {len(s)}")
    n_pos = int((yt == 1).sum())
    n_neg = int((yt == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise SingleClassInput("pr_auc needs both classes")
    order = np.argsort(-s, kind="stable")
    yt_sorted = yt[order]
    s_sorted = s[order]
    ap = 0.0
    tp = 0
    prev_recall = 0.0
    i = 0
    n = len(s)
    while i < n:
        j = i
        while j + 1 < n and s_sorted[j + 1] == s_sorted[i]:
            j += 1
        tp += int(yt_sorted[i:j + 1].sum())
        recall = tp / n_pos
        precision = tp / (j + 1)
        ap += precision * (recall - prev_recall)
        prev_recall = recall
        i = j + 1
    return float(ap)


def regression_metrics(y_true, y_pred):
    """Returns (mse, rmse, mae, mape, mape_absent). MAPE is a percentage
    and absent when any true value is zero."""
    yt = np.asarray(y_true, dtype=np.float64)
    yp = np.asarray(y_pred, dtype=np.float64)
    if yt.shape != yp.shape or yt.ndim != 1 or len(yt) == 0:
        raise LengthMismatch("y_true and y_pred must be equal-length 1-D, non-empty")
    err = yt - yp
    mse = float(np.mean(err ** 2))
    rmse = float(np.sqrt(mse))
    mae = float(np.mean(np.abs(err)))
    if (yt == 0).any():
        return mse, rmse, mae, None, True
    mape = float(np.mean(np.abs(err / yt)) * 100.0)
    return mse, rmse, mae, mape, False


def classification_report(y_true, y_pred, scores=None) -> MetricsReport:
    cm, acc, prec, rec, f1, pdeg, rdeg = classification_metrics(y_true, y_pred)
    report = MetricsReport(accuracy=acc, precision=prec, recall=rec, f1=f1,
                           precision_degenerate=pdeg, recall_degenerate=rdeg,
                           confusion=cm.to_dict())
    if scores is not None:
        try:
            report.roc_auc = roc_auc(y_true, scores)
            report.pr_auc = pr_auc(y_true, scores)
        except SingleClassInput:
            pass
    return report
