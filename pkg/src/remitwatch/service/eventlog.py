"""Append-only event log with crash recovery.

One JSON document per line, gap-free sequence numbers from 1. Appends
flush before acknowledging. On open, a partial final line (a torn
write) is truncated away; corruption anywhere before the tail refuses
to load.
"""

from __future__ import annotations

import json
import os
import threading

from .. import docio
from ..errors import CorruptLog

EVENT_KINDS = (
    "tx_mined", "tx_scored", "alert_fired", "alert_transitioned",
    "rule_changed", "model_registered", "annotation_added",
)


def _parse_event(line: str):
    try:
        doc = json.loads(line)
    except json.JSONDecodeError:
        return None
    if not isinstance(doc, dict):
        return None
    if not {"seq", "kind", "recorded_at", "payload"} <= set(doc):
        return None
    if doc["kind"] not in EVENT_KINDS:
        return None
    return doc


def scan_log(path):
    """Return (events, valid_byte_length). Raises CorruptLog when a bad
    line is followed by further lines (damage beyond a torn tail)."""
    events = []
    valid_bytes = 0
    if not os.path.exists(path):
        return events, 0
    with open(path, "rb") as fh:
        data = fh.read()
    offset = 0
    bad_at = None
    for raw in data.splitlines(keepends=True):
        line_complete = raw.endswith(b"\n")
        text = raw.decode("utf-8", errors="replace").strip()
        event = _parse_event(text) if text else None
        if event is None or not line_complete:
            if text or not line_complete:
                bad_at = offset
            offset += len(raw)
            continue
        if bad_at is not None:
            raise CorruptLog(
                f"valid event after corrupt data at byte {bad_at}")
        if event["seq"] != len(events) + 1:
            raise CorruptLog(
                f"sequence gap: expected {len(events) + 1}, got {event['seq']}")
        events.append(event)
        offset += len(raw)
        valid_bytes = offset
    return events, valid_bytes


class EventLog:
    """Single-writer append-only log. Readers use read_all()/read_from()
    on the in-memory copy, which mirrors the file exactly."""

    def __init__(self, path):
        self.path = str(path)
        self._lock = threading.Lock()
        events, valid_bytes = scan_log(self.path)
        self._events = events
        if os.path.exists(self.path):
            size = os.path.getsize(self.path)
            if size != valid_bytes:
                # torn tail: drop the partial record before appending
                with open(self.path, "rb+") as fh:
                    fh.truncate(valid_bytes)
        self._fh = open(self.path, "a", encoding="utf-8", newline="\n")

    @property
    def last_seq(self) -> int:
        return len(self._events)

    def append(self, kind: str, payload: dict, recorded_at: str) -> dict:
        if kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        with self._lock:
            event = {"seq": len(self._events) + 1, "kind": kind,
                     "recorded_at": recorded_at, "payload": payload}
            self._fh.write(docio.dumps(event) + "\n")
            self._fh.flush()
            self._events.append(event)
            return event

    def read_all(self):
        return list(self._events)

    def read_from(self, after_seq: int):
        return self._events[after_seq:]

    def close(self):
        self._fh.close()
