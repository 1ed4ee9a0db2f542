"""Alert lifecycle: fired incidents and their state machine."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import IllegalTransition

ALERT_STATES = ("open", "acknowledged", "escalated", "closed")

_LEGAL = {
    ("open", "acknowledged"),
    ("open", "closed"),
    ("acknowledged", "escalated"),
    ("acknowledged", "closed"),
}


@dataclass
class Alert:
    alert_id: str
    rule_id: str
    tx_hashes: list
    customer_id: str
    fired_at: str            # ISO-8601 UTC
    severity: str            # risk tier of the triggering score
    state: str = "open"
    note: str = ""
    actions: list = field(default_factory=list)
    audit: list = field(default_factory=list)   # (at, from, to, note)

    def to_dict(self) -> dict:
        return {"alert_id": self.alert_id, "rule_id": self.rule_id,
                "tx_hashes": list(self.tx_hashes), "customer_id": self.customer_id,
                "fired_at": self.fired_at, "severity": self.severity,
                "state": self.state, "note": self.note,
                "actions": list(self.actions),
                "audit": [list(entry) for entry in self.audit]}

    @classmethod
    def from_dict(cls, doc) -> "Alert":
        return cls(alert_id=doc["alert_id"], rule_id=doc["rule_id"],
                   tx_hashes=list(doc["tx_hashes"]), customer_id=doc["customer_id"],
                   fired_at=doc["fired_at"], severity=doc["severity"],
                   state=doc.get("state", "open"), note=doc.get("note", ""),
                   actions=list(doc.get("actions", [])),
                   audit=[tuple(e) for e in doc.get("audit", [])])


def transition_alert(alert: Alert, new_state: str, note: str = "",
                     at: str = "") -> Alert:
    """Apply a lifecycle transition in place, appending an audit entry."""
    if new_state not in ALERT_STATES:
        raise IllegalTransition(f"unknown state {new_state!r}")
    if (alert.state, new_state) not in _LEGAL:
        raise IllegalTransition(f"{alert.state} -> {new_state} is not allowed")
    alert.audit.append((at or alert.fired_at, alert.state, new_state, note))
    alert.state = new_state
    if note:
        alert.note = note
    return alert
