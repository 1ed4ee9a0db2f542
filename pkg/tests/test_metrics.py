"""Metric tests against independent brute-force oracles."""

import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from remitwatch.errors import LengthMismatch, SingleClassInput
from remitwatch.mlcore.metrics import (
    classification_metrics,
    classification_report,
    pr_auc,
    regression_metrics,
    roc_auc,
)


# --- independent oracles -------------------------------------------------

def counting_oracle(y_true, y_pred):
    tp = sum(1 for t, p in zip(y_true, y_pred) if t == 1 and p == 1)
    fp = sum(1 for t, p in zip(y_true, y_pred) if t == 0 and p == 1)
    tn = sum(1 for t, p in zip(y_true, y_pred) if t == 0 and p == 0)
    fn = sum(1 for t, p in zip(y_true, y_pred) if t == 1 and p == 0)
    n = len(y_true)
    acc = (tp + tn) / n
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    return tp, fp, tn, fn, acc, prec, rec, f1


def pair_oracle_auc(y_true, scores):
    """Exhaustive positive/negative pair enumeration, ties worth 1/2."""
    pos = [s for t, s in zip(y_true, scores) if t == 1]
    neg = [s for t, s in zip(y_true, scores) if t == 0]
    credit = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                credit += 1.0
            elif p == q:
                credit += 0.5
    return credit / (len(pos) * len(neg))


def ap_oracle(y_true, scores):
    """Average precision via explicit thresholds at each distinct score."""
    thresholds = sorted(set(scores), reverse=True)
    n_pos = sum(y_true)
    ap = 0.0
    prev_recall = 0.0
    for t in thresholds:
        predicted = [s >= t for s in scores]
        tp = sum(1 for yt, p in zip(y_true, predicted) if yt == 1 and p)
        fp = sum(1 for yt, p in zip(y_true, predicted) if yt == 0 and p)
        recall = tp / n_pos
        precision = tp / (tp + fp)
        ap += precision * (recall - prev_recall)
        prev_recall = recall
    return ap


# --- frozen hand-computed cases ------------------------------------------

class TestHandCases:
    def test_perfect_prediction(self):
        cm, acc, prec, rec, f1, pdeg, rdeg = classification_metrics([1, 0, 1], [1, 0, 1])
        assert (acc, prec, rec, f1) == (1.0, 1.0, 1.0, 1.0)
        assert not pdeg and not rdeg

    def test_half_right(self):
        cm, acc, prec, rec, f1, *_ = classification_metrics([1, 1, 0, 0], [1, 0, 1, 0])
        assert (cm.tp, cm.fp, cm.fn, cm.tn) == (1, 1, 1, 1)
        assert (acc, prec, rec, f1) == (0.5, 0.5, 0.5, 0.5)

    def test_degenerate_no_predicted_positives(self):
        cm, acc, prec, rec, f1, pdeg, rdeg = classification_metrics([1, 1, 0], [0, 0, 0])
        assert prec == 0.0 and pdeg
        assert rec == 0.0 and not rdeg

    def test_confusion_sums_to_n(self):
        cm, *_ = classification_metrics([1, 0, 1, 0, 1], [0, 0, 1, 1, 1])
        assert cm.total == 5

    def test_roc_auc_hand_pairs(self):
        # pairs: (.9>.8)ok (.9>.1)ok (.7<.8)no (.7>.1)ok -> 3/4
        assert roc_auc([1, 0, 1, 0], [0.9, 0.8, 0.7, 0.1]) == pytest.approx(0.75, abs=1e-12)

    def test_scores_equal_labels_perfect(self):
        y = [1, 0, 1, 0, 0, 1]
        assert roc_auc(y, y) == 1.0
        assert pr_auc(y, y) == 1.0

    def test_single_class_raises(self):
        with pytest.raises(SingleClassInput):
            roc_auc([1, 1], [0.3, 0.4])
        with pytest.raises(SingleClassInput):
            pr_auc([0, 0], [0.3, 0.4])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            classification_metrics([1, 0], [1])
        with pytest.raises(LengthMismatch):
            roc_auc([1, 0], [0.5])

    def test_regression_zero_error(self):
        assert regression_metrics([1.0, 2.0], [1.0, 2.0]) == (0.0, 0.0, 0.0, 0.0, False)

    def test_regression_hand_case(self):
        mse, rmse, mae, mape, absent = regression_metrics([1.0, 2.0], [2.0, 4.0])
        assert mse == pytest.approx(2.5)
        assert rmse == pytest.approx(math.sqrt(2.5))
        assert mae == pytest.approx(1.5)
        # |1-2|/1 = 1, |2-4|/2 = 1 -> mean 100%
        assert mape == pytest.approx(100.0)
        assert not absent

    def test_mape_absent_on_zero_truth(self):
        mse, rmse, mae, mape, absent = regression_metrics([0.0, 2.0], [1.0, 2.0])
        assert absent and mape is None
        assert mse == pytest.approx(0.5)

    def test_rmse_sqrt_mse_invariant(self):
        rng = np.random.default_rng(3)
        yt, yp = rng.normal(size=50) + 5, rng.normal(size=50) + 5
        mse, rmse, *_ = regression_metrics(yt, yp)
        assert abs(rmse - math.sqrt(mse)) <= 1e-12


# --- oracle equivalence sweeps --------------------------------------------

class TestOracleSweep:
    def test_thousand_random_counting_cases(self):
        rng = random.Random(42)
        for _ in range(1000):
            n = rng.randint(1, 200)
            y_true = [rng.randint(0, 1) for _ in range(n)]
            y_pred = [rng.randint(0, 1) for _ in range(n)]
            cm, acc, prec, rec, f1, *_ = classification_metrics(y_true, y_pred)
            tp, fp, tn, fn, o_acc, o_prec, o_rec, o_f1 = counting_oracle(y_true, y_pred)
            assert (cm.tp, cm.fp, cm.tn, cm.fn) == (tp, fp, tn, fn)
            assert acc == o_acc and prec == o_prec and rec == o_rec and f1 == o_f1

    def test_thousand_random_auc_cases(self):
        rng = random.Random(43)
        for _ in range(1000):
            n = rng.randint(2, 60)
            y_true = [rng.randint(0, 1) for _ in range(n)]
            if sum(y_true) in (0, n):
                y_true[0] = 1 - y_true[0]
            # discrete score levels force plenty of ties
            scores = [rng.choice([0.0, 0.25, 0.5, 0.75, 1.0]) for _ in range(n)]
            assert roc_auc(y_true, scores) == pytest.approx(
                pair_oracle_auc(y_true, scores), abs=1e-9)

    def test_random_ap_cases(self):
        rng = random.Random(44)
        for _ in range(300):
            n = rng.randint(2, 50)
            y_true = [rng.randint(0, 1) for _ in range(n)]
            if sum(y_true) in (0, n):
                y_true[0] = 1 - y_true[0]
            scores = [round(rng.random(), 2) for _ in range(n)]
            assert pr_auc(y_true, scores) == pytest.approx(
                ap_oracle(y_true, scores), abs=1e-9)

    def test_uniform_scores_near_half(self):
        rng = np.random.default_rng(7)
        n = 10_000
        y_true = (rng.random(n) < 0.3).astype(int)
        scores = rng.random(n)
        assert 0.47 <= roc_auc(y_true, scores) <= 0.53

    @given(st.lists(st.tuples(st.integers(0, 1), st.floats(0, 1)), min_size=2, max_size=80))
    def test_auc_pair_property(self, pairs):
        y_true = [p[0] for p in pairs]
        scores = [p[1] for p in pairs]
        if sum(y_true) in (0, len(y_true)):
            return
        assert roc_auc(y_true, scores) == pytest.approx(
            pair_oracle_auc(y_true, scores), abs=1e-9)


class TestReport:
    def test_report_roundtrip(self):
        from remitwatch.mlcore.metrics import MetricsReport
        rep = classification_report([1, 0, 1, 0], [1, 0, 0, 0], scores=[0.9, 0.2, 0.4, 0.1])
        doc = rep.to_dict()
        back = MetricsReport.from_dict(doc)
        assert back.to_dict() == doc
        assert rep.roc_auc == 1.0
