"""Declarative alert rules evaluated over each scored transaction and
its behavioral window.

Evaluation is pure: whether a rule fires on a record is a function of
(record, score, the sender's recent window, the ruleset) alone.
Windowed rules deduplicate per burst by construction: a rule fires
only when its condition holds now and did not already hold at a prior
transaction inside the rule's own window.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InvalidField

RULE_KINDS = ("amount_threshold", "velocity", "structuring", "score_threshold", "anomaly")
ACTIONS = ("notify-stream", "mark-review", "email")

_REQUIRED_PARAMS = {
    "amount_threshold": {"min_amount_minor": (int,)},
    "velocity": {"max_tx": (int,), "window_seconds": (int, float)},
    "structuring": {"threshold_minor": (int,), "margin": (float,),
                    "min_count": (int,), "window_seconds": (int, float)},
    "score_threshold": {"min_score": (int, float)},
    "anomaly": {"min_anomaly_score": (int, float)},
}


@dataclass
class AlertRule:
    rule_id: str
    name: str
    kind: str
    params: dict
    enabled: bool = True
    actions: list = field(default_factory=lambda: ["notify-stream"])

    def validate(self) -> None:
        if not self.rule_id:
            raise InvalidField("rule_id", "must be non-empty")
        if self.kind not in RULE_KINDS:
            raise InvalidField("kind", f"must be one of {RULE_KINDS}")
        required = _REQUIRED_PARAMS[self.kind]
        for key, types in required.items():
            if key not in self.params:
                raise InvalidField(f"params.{key}", "missing")
            value = self.params[key]
            if not isinstance(value, types) or isinstance(value, bool):
                raise InvalidField(f"params.{key}",
                                   f"must be {' or '.join(t.__name__ for t in types)}")
        if self.kind == "structuring":
            if not (0.0 < self.params["margin"] < 1.0):
                raise InvalidField("params.margin", "must be in (0, 1)")
            if self.params["min_count"] < 1:
                raise InvalidField("params.min_count", "must be >= 1")
        if self.kind == "velocity" and self.params["max_tx"] < 1:
            raise InvalidField("params.max_tx", "must be >= 1")
        for action in self.actions:
            if action not in ACTIONS:
                raise InvalidField("actions", f"unknown action {action!r}")

    @property
    def window_seconds(self) -> float:
        return float(self.params.get("window_seconds", 0.0))

    def to_dict(self) -> dict:
        return {"rule_id": self.rule_id, "name": self.name, "kind": self.kind,
                "params": dict(self.params), "enabled": self.enabled,
                "actions": list(self.actions)}

    @classmethod
    def from_dict(cls, doc) -> "AlertRule":
        rule = cls(rule_id=doc.get("rule_id", ""), name=doc.get("name", ""),
                   kind=doc.get("kind", ""), params=dict(doc.get("params", {})),
                   enabled=bool(doc.get("enabled", True)),
                   actions=list(doc.get("actions", ["notify-stream"])))
        rule.validate()
        return rule


@dataclass
class RuleFire:
    rule: AlertRule
    tx_hashes: list
    customer_id: str
    fired_at_epoch: int


def _structuring_band(rule):
    threshold = rule.params["threshold_minor"]
    return (1.0 - rule.params["margin"]) * threshold, threshold


def _condition_at(rule, events, at: int) -> tuple[bool, list]:
    """Does the rule's window condition hold at events[at]? `events`
    are the sender's (ts, amount, hash) tuples in stream order; only
    events up to and including `at` count. Returns (holds, hits)."""
    window = rule.window_seconds
    ts = events[at][0]
    if rule.kind == "velocity":
        hits = [h for (t, a, h) in events[: at + 1] if ts - window < t <= ts]
        return len(hits) > rule.params["max_tx"], hits
    if rule.kind == "structuring":
        lo, hi = _structuring_band(rule)
        hits = [h for (t, a, h) in events[: at + 1]
                if ts - window < t <= ts and lo <= a < hi]
        return len(hits) >= rule.params["min_count"], hits
    raise AssertionError(f"not a windowed kind: {rule.kind}")


def evaluate_rules(score, record, window, ruleset) -> list[RuleFire]:
    """Evaluate every enabled rule against one record.

    `window` holds the sender's prior records covering at least twice
    the longest rule window; `score` may be None when no model is
    active (score_threshold and anomaly rules then never fire).
    """
    fires = []
    events = [(r.timestamp_epoch, r.amount_minor, r.tx_hash) for r in window]
    events.append((record.timestamp_epoch, record.amount_minor, record.tx_hash))
    ts = record.timestamp_epoch
    last = len(events) - 1
    for rule in ruleset:
        if not rule.enabled:
            continue
        if rule.kind == "amount_threshold":
            if record.amount_minor >= rule.params["min_amount_minor"]:
                fires.append(RuleFire(rule, [record.tx_hash], record.sender_id, ts))
        elif rule.kind == "score_threshold":
            if score is not None and score.probability >= rule.params["min_score"]:
                fires.append(RuleFire(rule, [record.tx_hash], record.sender_id, ts))
        elif rule.kind == "anomaly":
            if score is not None and score.anomaly_score >= rule.params["min_anomaly_score"]:
                fires.append(RuleFire(rule, [record.tx_hash], record.sender_id, ts))
        else:
            holds, hits = _condition_at(rule, events, last)
            if not holds:
                continue
            # burst dedup: suppressed if the condition already held at a
            # prior tx of this sender inside the rule's own window
            window_s = rule.window_seconds
            already = False
            for j in range(last - 1, -1, -1):
                if events[j][0] <= ts - window_s:
                    break
                if _condition_at(rule, events, j)[0]:
                    already = True
                    break
            if not already:
                fires.append(RuleFire(rule, hits, record.sender_id, ts))
    return fires
