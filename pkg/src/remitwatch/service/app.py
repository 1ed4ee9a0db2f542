"""HTTP API + server-push event stream over the service runtime.

Plain ThreadingHTTPServer: every documented endpoint is a JSON body in
and a JSON document out, errors are machine-readable ({error, field}
for 400), and GET /api/stream speaks text/event-stream with
Last-Event-ID resume and periodic heartbeat comments.
"""

from __future__ import annotations

import json
import queue
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .. import docio
from ..analytics import Query, ReportSpec, drill_down, generate_report, run_query, summarize
from ..analytics.query import NUMERIC_FIELDS
from ..errors import (
    BadOperatorForType,
    IllegalTransition,
    InvalidConfig,
    InvalidField,
    InvalidSpec,
    RemitwatchError,
    UnknownCustomer,
    UnknownField,
    UnknownId,
)
from .config import ServiceConfig
from .runtime import ServiceRuntime, _now_iso

_BAD_REQUEST = (InvalidConfig, InvalidField, InvalidSpec, BadOperatorForType,
                UnknownField, ValueError, KeyError, TypeError)
_NOT_FOUND = (UnknownId, UnknownCustomer)


def _parse_filters(params) -> list:
    filters = []
    for raw in params.get("filter", []):
        parts = raw.split(":", 2)
        if len(parts) != 3:
            raise InvalidField("filter", "expected field:op:value")
        name, op, value = parts
        if name in NUMERIC_FIELDS:
            if op == "in":
                value = [int(v) for v in value.split(",")]
            else:
                value = int(value)
        elif op == "in":
            value = value.split(",")
        filters.append((name, op, value))
    return filters


def _query_from_params(params) -> Query:
    sort = params.get("sort", ["timestamp"])[0]
    direction = "asc"
    if sort.startswith("-"):
        sort, direction = sort[1:], "desc"
    return Query(
        filters=_parse_filters(params),
        time_from=params.get("from", [None])[0],
        time_to=params.get("to", [None])[0],
        sort_field=sort,
        sort_dir=direction,
        limit=int(params.get("limit", ["100"])[0]),
        offset=int(params.get("offset", ["0"])[0]),
    )


class Api:
    """Route table + handlers, kept separate from the HTTP plumbing so
    tests can drive it directly."""

    def __init__(self, runtime: ServiceRuntime, config: ServiceConfig):
        self.runtime = runtime
        self.config = config
        self.reports: dict[str, dict] = {}
        self._report_seq = 0

    # every handler returns (status, document)

    def post_scenario(self, body, params):
        blocks = body.pop("blocks", None)
        config_doc = body.get("config", body)
        result = self.runtime.load_scenario(config_doc, blocks)
        return 200, {"scenario_id": result["scenario_id"],
                     "transactions": result["transactions"],
                     "blocks": result["blocks"]}

    def post_replay(self, body, params):
        speed = body.get("speed", "max")
        data = body.get("data")
        if data is None:
            raise InvalidField("data", "dataset reference required")
        stats = self.runtime.stream_dataset(data, speed)
        return 200, stats

    def get_transactions(self, body, params):
        q = _query_from_params(params)
        with self.runtime.lock:
            return 200, run_query(self.runtime.store.records_in_order(), q)

    def get_transaction(self, body, params, tx_hash):
        with self.runtime.lock:
            record = self.runtime.store.ledger.get(tx_hash)
            if record is None:
                raise UnknownId(f"unknown transaction {tx_hash!r}")
            doc = dict(record)
            score = self.runtime.store.scores.get(tx_hash)
            if score:
                doc["score"] = score
            return 200, doc

    def get_customer_history(self, body, params, customer_id):
        with self.runtime.lock:
            return 200, drill_down(self.runtime.store.records_in_order(), customer_id,
                                   time_from=params.get("from", [None])[0],
                                   time_to=params.get("to", [None])[0])

    def post_models_train(self, body, params):
        artifact = self.runtime.train_model(
            body.get("model_type", ""), body.get("config", {}),
            body.get("data", ""), float(body.get("test_fraction", 0.25)))
        return 200, {"model_id": artifact.model_id,
                     "metrics": artifact.metrics.to_dict()}

    def get_model(self, body, params, model_id):
        return 200, self.runtime.get_artifact(model_id).to_dict()

    def get_model_metrics(self, body, params, model_id):
        return 200, self.runtime.get_artifact(model_id).metrics.to_dict()

    def post_model_activate(self, body, params, model_id):
        self.runtime.activate_model(model_id)
        return 200, {"model_id": model_id, "active": True}

    def get_rules(self, body, params):
        with self.runtime.lock:
            return 200, {"rules": sorted(self.runtime.store.rules.values(),
                                         key=lambda r: r["rule_id"])}

    def post_rules(self, body, params):
        rule = self.runtime.upsert_rule(body)
        return 200, rule.to_dict()

    def put_rule(self, body, params, rule_id):
        body = dict(body)
        body["rule_id"] = rule_id
        rule = self.runtime.upsert_rule(body)
        return 200, rule.to_dict()

    def get_alerts(self, body, params):
        state = params.get("state", [None])[0]
        with self.runtime.lock:
            alerts = sorted(self.runtime.store.alerts.values(),
                            key=lambda a: a["alert_id"])
        if state is not None:
            alerts = [a for a in alerts if a["state"] == state]
        return 200, {"alerts": alerts}

    def post_alert_transition(self, body, params, alert_id):
        state = body.get("state")
        if state is None:
            raise InvalidField("state", "target state required")
        alert = self.runtime.transition_alert(alert_id, state, body.get("note", ""))
        return 200, alert

    def get_summary(self, body, params):
        group_by = params.get("group_by", [""])[0]
        group_fields = [f for f in group_by.split(",") if f]
        aggs = []
        for raw in params.get("agg", ["count"]):
            for part in raw.split(","):
                if part == "count":
                    aggs.append(("count", None))
                elif ":" in part:
                    op, fname = part.split(":", 1)
                    aggs.append((op, fname))
                else:
                    raise InvalidField("agg", "expected count or op:field")
        with self.runtime.lock:
            table = summarize(self.runtime.store.records_in_order(), group_fields, aggs)
        return 200, table.to_dict()

    def post_reports(self, body, params):
        spec = ReportSpec.from_dict(body)
        with self.runtime.lock:
            report = generate_report(spec, self.runtime.store.records_in_order())
            self._report_seq += 1
            report_id = f"rpt-{self._report_seq:06d}"
            self.reports[report_id] = report
        return 200, {"report_id": report_id}

    def get_report(self, body, params, report_id):
        report = self.reports.get(report_id)
        if report is None:
            raise UnknownId(f"unknown report {report_id!r}")
        return 200, report

    def get_dashboard(self, body, params):
        return 200, self.runtime.dashboard()

    def post_annotations(self, body, params):
        return 200, self.runtime.add_annotation(
            dict(body, created_at=body.get("created_at", _now_iso())))


ROUTES = [
    ("POST", re.compile(r"^/api/scenario$"), "post_scenario"),
    ("POST", re.compile(r"^/api/replay$"), "post_replay"),
    ("GET", re.compile(r"^/api/transactions$"), "get_transactions"),
    ("GET", re.compile(r"^/api/transactions/(?P<tx_hash>0x[0-9a-f]{64})$"), "get_transaction"),
    ("GET", re.compile(r"^/api/customers/(?P<customer_id>[^/]+)/history$"), "get_customer_history"),
    ("POST", re.compile(r"^/api/models/train$"), "post_models_train"),
    ("GET", re.compile(r"^/api/models/(?P<model_id>[^/]+)/metrics$"), "get_model_metrics"),
    ("POST", re.compile(r"^/api/models/(?P<model_id>[^/]+)/activate$"), "post_model_activate"),
    ("GET", re.compile(r"^/api/models/(?P<model_id>[^/]+)$"), "get_model"),
    ("GET", re.compile(r"^/api/rules$"), "get_rules"),
    ("POST", re.compile(r"^/api/rules$"), "post_rules"),
    ("PUT", re.compile(r"^/api/rules/(?P<rule_id>[^/]+)$"), "put_rule"),
    ("GET", re.compile(r"^/api/alerts$"), "get_alerts"),
    ("POST", re.compile(r"^/api/alerts/(?P<alert_id>[^/]+)/transition$"), "post_alert_transition"),
    ("GET", re.compile(r"^/api/summary$"), "get_summary"),
    ("POST", re.compile(r"^/api/reports$"), "post_reports"),
    ("GET", re.compile(r"^/api/reports/(?P<report_id>[^/]+)$"), "get_report"),
    ("GET", re.compile(r"^/api/dashboard$"), "get_dashboard"),
    ("POST", re.compile(r"^/api/annotations$"), "post_annotations"),
]


class Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    api: Api = None   # set by make_server

    def log_message(self, fmt, *args):
        pass

    def _send_json(self, status: int, doc) -> None:
        body = docio.dumps(doc).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _dispatch(self, method: str) -> None:
        parsed = urlparse(self.path)
        if method == "GET" and parsed.path == "/api/stream":
            return self._stream(parse_qs(parsed.query))
        body = {}
        length = int(self.headers.get("Content-Length") or 0)
        if length:
            try:
                body = json.loads(self.rfile.read(length))
            except json.JSONDecodeError:
                return self._send_json(400, {"error": "body must be JSON", "field": None})
        for (verb, pattern, name) in ROUTES:
            if verb != method:
                continue
            match = pattern.match(parsed.path)
            if not match:
                continue
            try:
                status, doc = getattr(self.api, name)(body, parse_qs(parsed.query),
                                                      **match.groupdict())
                return self._send_json(status, doc)
            except IllegalTransition as exc:
                return self._send_json(409, {"error": str(exc), "field": "state"})
            except _NOT_FOUND as exc:
                return self._send_json(404, {"error": str(exc), "field": None})
            except InvalidField as exc:
                return self._send_json(400, {"error": exc.rule, "field": exc.field})
            except InvalidSpec as exc:
                return self._send_json(400, {"error": exc.reason, "field": exc.section})
            except InvalidConfig as exc:
                return self._send_json(400, {"error": str(exc), "field": "config"})
            except _BAD_REQUEST as exc:
                return self._send_json(400, {"error": str(exc), "field": None})
            except RemitwatchError as exc:
                return self._send_json(400, {"error": str(exc), "field": None})
        self._send_json(404, {"error": f"no route for {method} {parsed.path}",
                              "field": None})

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_PUT(self):
        self._dispatch("PUT")

    # ------------------------------------------------------------------

    def _stream(self, params) -> None:
        """text/event-stream: one `event:`/`id:`/`data:` frame per event,
        heartbeat comments between, Last-Event-ID resume."""
        last_seen = self.headers.get("Last-Event-ID")
        if last_seen is None:
            last_seen = params.get("last_event_id", ["0"])[0]
        try:
            last_seen = int(last_seen)
        except ValueError:
            last_seen = 0
        runtime = self.api.runtime
        self.send_response(200)
        self.send_header("Content-Type", "text/event-stream")
        self.send_header("Cache-Control", "no-cache")
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        live = runtime.subscribe()
        sent = last_seen
        try:
            for event in runtime.log.read_from(last_seen):
                self._write_event(event)
                sent = event["seq"]
            while True:
                try:
                    event = live.get(timeout=self.api.config.heartbeat_seconds)
                except queue.Empty:
                    self.wfile.write(b": hb\n\n")
                    self.wfile.flush()
                    continue
                if event["seq"] <= sent:
                    continue
                self._write_event(event)
                sent = event["seq"]
        except (BrokenPipeError, ConnectionResetError, OSError):
            pass
        finally:
            runtime.unsubscribe(live)

    def _write_event(self, event) -> None:
        data = docio.dumps({"kind": event["kind"], "recorded_at": event["recorded_at"],
                            "payload": event["payload"]})
        frame = f"event: {event['kind']}\nid: {event['seq']}\ndata: {data}\n\n"
        self.wfile.write(frame.encode("utf-8"))
        self.wfile.flush()


def make_server(config: ServiceConfig) -> tuple:
    runtime = ServiceRuntime(config.data_dir, thresholds=config.tier_thresholds)
    api = Api(runtime, config)
    handler = type("BoundHandler", (Handler,), {"api": api})
    server = ThreadingHTTPServer((config.host, config.port), handler)
    server.daemon_threads = True
    return server, runtime, api


def serve(config: ServiceConfig):
    """Run the service until interrupted."""
    server, runtime, _api = make_server(config)
    if config.scenario_path:
        with open(config.scenario_path, "r", encoding="utf-8") as fh:
            runtime.load_scenario(json.load(fh))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, runtime
