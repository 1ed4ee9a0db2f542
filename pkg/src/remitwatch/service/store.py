"""Materialized views over the event log.

A Store is a deterministic fold of events 1..n: replaying the same log
always reproduces the same views, byte for byte (snapshot_hash pins
this). Views hold only payload-derived data, never wall-clock state.
"""

from __future__ import annotations

from .. import docio


class Store:
    def __init__(self):
        self.seq = 0
        self.ledger: dict[str, dict] = {}          # tx_hash -> record
        self.tx_order: list[str] = []              # insertion (block) order
        self.customers: dict[str, dict] = {}
        self.scores: dict[str, dict] = {}
        self.alerts: dict[str, dict] = {}
        self.rules: dict[str, dict] = {}
        self.models: dict[str, dict] = {}
        self.active_model_id: str | None = None
        self.annotations: list[dict] = []
        self.scenario_header: dict | None = None

    def apply(self, event: dict) -> None:
        if event["seq"] != self.seq + 1:
            raise ValueError(f"out-of-order event {event['seq']} after {self.seq}")
        kind = event["kind"]
        payload = event["payload"]
        handler = getattr(self, f"_apply_{kind}")
        handler(payload)
        self.seq = event["seq"]

    def _apply_tx_mined(self, payload):
        record = payload["record"]
        if "header" in payload and payload["header"]:
            self.scenario_header = payload["header"]
        h = record["tx_hash"]
        if h not in self.ledger:
            self.tx_order.append(h)
        self.ledger[h] = record
        for side in ("sender", "receiver"):
            cid = record[f"{side}_id"]
            entry = self.customers.get(cid)
            if entry is None:
                entry = self.customers[cid] = {
                    "customer_id": cid,
                    "name": record[f"{side}_name"],
                    "postal_address": record[f"{side}_address"],
                    "identification_number": record[f"{side}_identification_number"],
                    "wallet_address": record[f"{side}_wallet"],
                    "first_seen": record["timestamp"],
                    "sent_count": 0, "received_count": 0,
                    "sent_amount_minor": 0,
                }
            if side == "sender":
                entry["sent_count"] += 1
                entry["sent_amount_minor"] += record["amount_minor"]
            else:
                entry["received_count"] += 1

    def _apply_tx_scored(self, payload):
        self.scores[payload["tx_hash"]] = payload

    def _apply_alert_fired(self, payload):
        self.alerts[payload["alert_id"]] = dict(payload)

    def _apply_alert_transitioned(self, payload):
        alert = self.alerts.get(payload["alert_id"])
        if alert is None:
            return
        alert["state"] = payload["to"]
        if payload.get("note"):
            alert["note"] = payload["note"]
        alert.setdefault("audit", []).append(
            [payload.get("at", ""), payload["from"], payload["to"],
             payload.get("note", "")])

    def _apply_rule_changed(self, payload):
        if payload.get("action") == "delete":
            self.rules.pop(payload["rule_id"], None)
        else:
            rule = payload["rule"]
            self.rules[rule["rule_id"]] = rule

    def _apply_model_registered(self, payload):
        if payload.get("action") == "activate":
            if payload["model_id"] in self.models:
                self.active_model_id = payload["model_id"]
        else:
            artifact = payload["artifact"]
            self.models[artifact["model_id"]] = artifact

    def _apply_annotation_added(self, payload):
        self.annotations.append(dict(payload))

    # ------------------------------------------------------------------

    def records_in_order(self) -> list[dict]:
        return [self.ledger[h] for h in self.tx_order]

    def views(self) -> dict:
        return {
            "seq": self.seq,
            "ledger": self.ledger,
            "tx_order": self.tx_order,
            "customers": self.customers,
            "scores": self.scores,
            "alerts": self.alerts,
            "rules": self.rules,
            "models": {k: {"model_id": k,
                           "model_type": v.get("model_type"),
                           "metrics": v.get("metrics")}
                       for k, v in self.models.items()},
            "active_model_id": self.active_model_id,
            "annotations": self.annotations,
        }

    def snapshot_hash(self) -> str:
        return docio.doc_hash(self.views())


def replay(events) -> Store:
    """Deterministic fold of an event sequence into a fresh store."""
    store = Store()
    for event in events:
        store.apply(event)
    return store
