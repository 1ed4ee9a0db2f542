"""Streaming rule engine: feeds time-ordered records through
evaluate_rules with rolling per-sender windows and mints Alert objects."""

from __future__ import annotations

from collections import deque

from .. import docio
from .alerts import Alert
from .rules import evaluate_rules


class RuleEngine:
    """Single-writer stream processor. Evaluators always see a consistent
    ruleset snapshot; replace_rules swaps it between records while the
    behavioral windows live on."""

    def __init__(self, ruleset):
        self.windows: dict[str, deque] = {}
        self.alert_seq = 0
        self.ruleset: list = []
        self.horizon = 0.0
        self.replace_rules(ruleset)

    def replace_rules(self, ruleset) -> None:
        ruleset = list(ruleset)
        for rule in ruleset:
            rule.validate()
        self.ruleset = ruleset
        for rule in ruleset:
            self.horizon = max(self.horizon, 2.0 * rule.window_seconds)

    def _window(self, sender_id: str) -> deque:
        w = self.windows.get(sender_id)
        if w is None:
            w = self.windows[sender_id] = deque()
        return w

    def process(self, record, score=None) -> list[Alert]:
        """Evaluate the ruleset against one record; returns new alerts."""
        window = self._window(record.sender_id)
        fires = evaluate_rules(score, record, window, self.ruleset)
        window.append(record)
        cutoff = record.timestamp_epoch - self.horizon
        while window and window[0].timestamp_epoch <= cutoff:
            window.popleft()
        alerts = []
        for fire in fires:
            self.alert_seq += 1
            alerts.append(Alert(
                alert_id=f"A{self.alert_seq:06d}",
                rule_id=fire.rule.rule_id,
                tx_hashes=fire.tx_hashes,
                customer_id=fire.customer_id,
                fired_at=docio.format_iso_utc(fire.fired_at_epoch),
                severity=score.tier if score is not None else "medium",
                actions=list(fire.rule.actions),
            ))
        return alerts

    def process_stream(self, records, scores=None) -> list[Alert]:
        alerts = []
        for i, record in enumerate(records):
            score = scores[i] if scores is not None else None
            alerts.extend(self.process(record, score))
        return alerts


def default_ruleset(report_threshold: int) -> list:
    """The rules a fresh service starts with."""
    from .rules import AlertRule

    return [
        AlertRule(rule_id="R-amount", name="Large transfer",
                  kind="amount_threshold",
                  params={"min_amount_minor": report_threshold}),
        AlertRule(rule_id="R-structuring", name="Sub-threshold structuring",
                  kind="structuring",
                  params={"threshold_minor": report_threshold, "margin": 0.3,
                          "min_count": 5, "window_seconds": 86_400}),
        AlertRule(rule_id="R-velocity", name="Transfer velocity",
                  kind="velocity", params={"max_tx": 8, "window_seconds": 600}),
        AlertRule(rule_id="R-score", name="Model risk score",
                  kind="score_threshold", params={"min_score": 0.9}),
        AlertRule(rule_id="R-anomaly", name="Feature anomaly",
                  kind="anomaly", params={"min_anomaly_score": 6.0}),
    ]
