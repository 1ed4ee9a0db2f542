"""Service runtime: the single writer that turns incoming transactions
into events, scores, and alerts, and the read surface the HTTP layer
queries.

All mutation funnels through one lock. Readers take the same lock for
the duration of a query (desk-scale stores make that cheap); the SSE
fan-out hands events to per-subscriber queues and never blocks the
writer.
"""

from __future__ import annotations

import hashlib
import os
import queue
import re
import threading
import time

from .. import docio
from ..analytics import dashboard_snapshot
from ..chainsim import ScenarioConfig, init_scenario
from ..errors import InvalidField, TimeOrderViolation, UnknownId
from ..mlcore import (
    ForestConfig,
    GbmConfig,
    LogisticConfig,
    anomaly_fit,
    classification_report,
    make_artifact,
    save_artifact,
    train_forest,
    train_gbm,
    train_logistic,
)
from ..mlcore.artifact import ModelArtifact
from ..pipeline import (
    FeatureStream,
    extract_features,
    fit_normalizer,
    read_dataset,
    schema_hash,
    temporal_split,
    validate,
)
from ..riskengine import (
    Alert,
    AlertRule,
    RuleEngine,
    TransactionScorer,
    default_ruleset,
    transition_alert,
)
from .eventlog import EventLog
from .store import Store, replay

def _now_iso() -> str:
    return docio.format_iso_utc(int(time.time()))


_MODEL_TRAINERS = {
    "logistic": (LogisticConfig, train_logistic),
    "gbm": (GbmConfig, train_gbm),
    "forest": (ForestConfig, train_forest),
}


class ServiceRuntime:
    def __init__(self, data_dir, thresholds=(0.5, 0.9)):
        self.data_dir = str(data_dir)
        os.makedirs(self.data_dir, exist_ok=True)
        self.lock = threading.RLock()
        self.log = EventLog(os.path.join(self.data_dir, "events.log"))
        self.store = replay(self.log.read_all())
        self.thresholds = thresholds
        self.subscribers: list[queue.Queue] = []
        self.corridor_risk = None
        if self.store.scenario_header:
            cfg = self.store.scenario_header.get("config", {})
            self.corridor_risk = {f"{c[0]}->{c[1]}": c[2]
                                  for c in cfg.get("corridors", [])}
        self.features = FeatureStream(self.corridor_risk)
        self.rule_engine = RuleEngine(
            [AlertRule.from_dict(r) for r in self.store.rules.values()])
        self.scorer = None
        self._artifacts: dict[str, ModelArtifact] = {}
        self._warm_up()

    def _warm_up(self):
        """Rebuild streaming state (windows, scorer, alert counter) from
        the replayed store after a restart."""
        for record_doc in self.store.records_in_order():
            record = validate(docio.dumps(record_doc))
            self.features.extract_and_push(record)
            window = self.rule_engine._window(record.sender_id)
            window.append(record)
            cutoff = record.timestamp_epoch - self.rule_engine.horizon
            while window and window[0].timestamp_epoch <= cutoff:
                window.popleft()
        seqs = [int(m.group(1)) for a in self.store.alerts
                if (m := re.match(r"A(\d+)$", a))]
        self.rule_engine.alert_seq = max(seqs, default=0)
        for model_id, artifact_doc in self.store.models.items():
            self._artifacts[model_id] = ModelArtifact.from_dict(artifact_doc)
        if self.store.active_model_id:
            self._activate_scorer(self.store.active_model_id)

    # ------------------------------------------------------------------
    # event plumbing

    def _emit(self, kind: str, payload: dict, recorded_at: str) -> dict:
        event = self.log.append(kind, payload, recorded_at)
        self.store.apply(event)
        for q in list(self.subscribers):
            q.put(event)
        return event

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self.lock:
            self.subscribers.append(q)
        return q

    def unsubscribe(self, q) -> None:
        with self.lock:
            if q in self.subscribers:
                self.subscribers.remove(q)

    # ------------------------------------------------------------------
    # scoring path

    def ingest_record(self, record, header=None) -> list[Alert]:
        """tx_mined -> score -> rules -> events, in arrival order.

        A record older than its sender's window (a late replay of
        historical data) is scored without behavioral context instead
        of failing the stream."""
        with self.lock:
            payload = {"record": record.to_dict()}
            if header:
                payload["header"] = header
            self._emit("tx_mined", payload, record.timestamp)
            try:
                features = self.features.extract_and_push(record)
            except TimeOrderViolation:
                features = extract_features(record, (), self.corridor_risk)
            score = None
            if self.scorer is not None:
                score = self.scorer.score_vector(record, features)
                self._emit("tx_scored", score.to_dict(), record.timestamp)
            alerts = self.rule_engine.process(record, score)
            for alert in alerts:
                self._emit("alert_fired", alert.to_dict(), record.timestamp)
            return alerts

    # ------------------------------------------------------------------
    # scenario + datasets

    def load_scenario(self, config_doc: dict, blocks: int | None = None) -> dict:
        config = ScenarioConfig.from_dict(config_doc)
        if blocks is None:
            blocks = max(1, int(round(config.duration / config.mean_block_interval)))
        sim = init_scenario(config)
        sim.advance(blocks)
        header = sim.export_header()
        scenario_id = "scn-" + hashlib.sha256(
            docio.dumps_sorted(header).encode()).hexdigest()[:12]
        path = os.path.join(self.data_dir, f"{scenario_id}.jsonl")
        count = sim.export_dataset(path)
        with self.lock:
            self.corridor_risk = config.corridor_risk_map()
            self.features.corridor_risk = self.corridor_risk
            if not self.store.rules:
                for rule in default_ruleset(config.report_threshold):
                    self.upsert_rule(rule.to_dict())
        return {"scenario_id": scenario_id, "path": path,
                "transactions": count, "blocks": blocks, "header": header}

    def dataset_path(self, ref: str) -> str:
        if ref.startswith("scn-") and os.sep not in ref:
            return os.path.join(self.data_dir, f"{ref}.jsonl")
        return ref

    def stream_dataset(self, path, speed="max", on_record=None) -> dict:
        """Re-emit a dataset as a live stream through the scoring path.
        `speed` is a wall-clock multiplier; "max" never sleeps."""
        header, records = read_dataset(self.dataset_path(path))
        if self.corridor_risk is None and header.get("config"):
            self.corridor_risk = {f"{c[0]}->{c[1]}": c[2]
                                  for c in header["config"].get("corridors", [])}
            self.features.corridor_risk = self.corridor_risk
        pace = None if speed in ("max", None) else float(speed)
        t0 = time.perf_counter()
        prev_ts = None
        alerts = 0
        first = True
        for record in records:
            if pace and prev_ts is not None:
                gap = (record.timestamp_epoch - prev_ts) / pace
                if gap > 0:
                    time.sleep(min(gap, 5.0))
            prev_ts = record.timestamp_epoch
            fired = self.ingest_record(record, header=header if first else None)
            first = False
            alerts += len(fired)
            if on_record is not None:
                on_record(record, fired)
        elapsed = time.perf_counter() - t0
        return {"transactions": len(records), "alerts": alerts,
                "seconds": elapsed,
                "tps": len(records) / elapsed if elapsed > 0 else float("inf")}

    # ------------------------------------------------------------------
    # models

    def train_model(self, model_type: str, config_doc: dict, data_ref: str,
                    test_fraction: float = 0.25) -> ModelArtifact:
        if model_type not in _MODEL_TRAINERS:
            raise InvalidField("model_type", f"unknown model_type {model_type!r}")
        config_cls, trainer = _MODEL_TRAINERS[model_type]
        config = config_cls(**(config_doc or {}))
        path = self.dataset_path(data_ref)
        header, records = read_dataset(path)
        corridor_risk = {f"{c[0]}->{c[1]}": c[2]
                         for c in header.get("config", {}).get("corridors", [])}
        X, y, split_at = build_training_matrix(records, corridor_risk, test_fraction)
        norm = fit_normalizer(X[:split_at])
        Z = (X - norm.mean) / norm.std
        model = trainer(Z[:split_at], y[:split_at], config)
        scores = model.predict_proba_batch(Z[split_at:])
        report = classification_report(y[split_at:].astype(int),
                                       (scores >= 0.5).astype(int), scores)
        with open(path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        artifact = make_artifact(
            model_type, model, schema_hash(),
            hyperparameters={k: getattr(config, k) for k in config.__dataclass_fields__},
            train_meta={"seed": getattr(config, "seed", 0),
                        "timestamp": records[-1].timestamp,
                        "dataset_digest": digest,
                        "train_rows": int(split_at),
                        "test_rows": int(len(y) - split_at)},
            metrics=report, normalizer=norm,
            anomaly_stats=anomaly_fit(X[:split_at]))
        save_artifact(artifact, os.path.join(self.data_dir, f"{artifact.model_id}.json"))
        with self.lock:
            self._artifacts[artifact.model_id] = artifact
            self._emit("model_registered",
                       {"action": "register", "artifact": artifact.to_dict()},
                       _now_iso())
        return artifact

    def _activate_scorer(self, model_id: str):
        artifact = self._artifacts.get(model_id)
        if artifact is None:
            artifact = ModelArtifact.from_dict(self.store.models[model_id])
            self._artifacts[model_id] = artifact
        self.scorer = TransactionScorer(artifact, self.thresholds, self.corridor_risk)

    def activate_model(self, model_id: str) -> None:
        with self.lock:
            if model_id not in self.store.models:
                raise UnknownId(f"unknown model {model_id!r}")
            self._activate_scorer(model_id)
            self._emit("model_registered", {"action": "activate", "model_id": model_id},
                       _now_iso())

    def get_artifact(self, model_id: str) -> ModelArtifact:
        if model_id in self._artifacts:
            return self._artifacts[model_id]
        if model_id in self.store.models:
            artifact = ModelArtifact.from_dict(self.store.models[model_id])
            self._artifacts[model_id] = artifact
            return artifact
        raise UnknownId(f"unknown model {model_id!r}")

    # ------------------------------------------------------------------
    # rules, alerts, annotations

    def upsert_rule(self, rule_doc: dict) -> AlertRule:
        rule = AlertRule.from_dict(rule_doc)
        with self.lock:
            self._emit("rule_changed", {"action": "upsert", "rule_id": rule.rule_id,
                                        "rule": rule.to_dict()},
                       _now_iso())
            self.rule_engine.replace_rules(
                [AlertRule.from_dict(r) for r in self.store.rules.values()])
        return rule

    def transition_alert(self, alert_id: str, new_state: str, note: str = "") -> dict:
        with self.lock:
            doc = self.store.alerts.get(alert_id)
            if doc is None:
                raise UnknownId(f"unknown alert {alert_id!r}")
            alert = Alert.from_dict(doc)
            from_state = alert.state
            transition_alert(alert, new_state, note, at=alert.fired_at)
            self._emit("alert_transitioned",
                       {"alert_id": alert_id, "from": from_state, "to": new_state,
                        "note": note, "at": alert.fired_at},
                       alert.fired_at)
            return self.store.alerts[alert_id]

    def add_annotation(self, annotation_doc: dict) -> dict:
        from ..analytics import MetadataAnnotation, annotate

        annotation = MetadataAnnotation.from_dict(annotation_doc)
        with self.lock:
            def exists(kind, target_id):
                if kind == "transaction":
                    return target_id in self.store.ledger
                if kind == "customer":
                    return target_id in self.store.customers
                if kind == "alert":
                    return target_id in self.store.alerts
                if kind == "model":
                    return target_id in self.store.models
                return False
            annotate(exists, annotation)
            self._emit("annotation_added", annotation.to_dict(), annotation.created_at)
        return annotation.to_dict()

    # ------------------------------------------------------------------
    # read surface

    def dashboard(self) -> dict:
        with self.lock:
            metrics = None
            if self.store.active_model_id:
                doc = self.store.models.get(self.store.active_model_id, {})
                metrics = {"model_id": self.store.active_model_id,
                           "model_type": doc.get("model_type"),
                           "metrics": doc.get("metrics")}
            return dashboard_snapshot(
                self.store.records_in_order(),
                alerts=list(self.store.alerts.values()),
                scores=list(self.store.scores.values()),
                model_metrics=metrics,
                customers_count=len(self.store.customers))


def build_training_matrix(records, corridor_risk, test_fraction):
    """Sort records in time, featurize with streaming windows, and return
    (X, y, split_index) honoring the temporal split."""
    import numpy as np
    from ..pipeline import build_matrix

    ordered = sorted(records, key=lambda r: (r.timestamp_epoch, r.tx_hash))
    split = temporal_split(ordered, test_fraction)
    X, y, _hashes = build_matrix(ordered, corridor_risk)
    return np.asarray(X), np.asarray(y), len(split.train)
