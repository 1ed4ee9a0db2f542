"""Structured-document helpers: canonical JSON lines and timestamps.

Every persisted surface (dataset exports, rulesets, the event log,
reports, model artifacts) is UTF-8 JSON, one document per line. Dumps
are canonical so that identical state always produces identical bytes:
compact separators, insertion-ordered keys for records, sorted keys for
hashing.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone

EPOCH_2020 = 1577836800  # sanity floor for scenario clocks


def dumps(doc) -> str:
    """Compact, byte-stable JSON serialization preserving key order."""
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True)


def dumps_sorted(doc) -> str:
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True, sort_keys=True)


def loads(line):
    return json.loads(line)


def doc_hash(doc) -> str:
    """sha256 hex digest of the sort-keyed canonical serialization."""
    return hashlib.sha256(dumps_sorted(doc).encode("utf-8")).hexdigest()


_DAYS_IN_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def parse_iso_utc(ts: str) -> int:
    """Parse 'YYYY-MM-DDTHH:MM:SSZ' to epoch seconds.

    Hand-rolled because this sits on the per-transaction hot path and
    datetime.fromisoformat on 3.10 rejects the trailing Z.
    """
    if len(ts) != 20 or ts[4] != "-" or ts[7] != "-" or ts[10] != "T" \
            or ts[13] != ":" or ts[16] != ":" or ts[19] != "Z":
        raise ValueError(f"bad timestamp: {ts!r}")
    year = int(ts[0:4])
    month = int(ts[5:7])
    day = int(ts[8:10])
    hour = int(ts[11:13])
    minute = int(ts[14:16])
    second = int(ts[17:19])
    if not (1 <= month <= 12):
        raise ValueError(f"bad timestamp month: {ts!r}")
    leap = month == 2 and year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)
    if not (1 <= day <= _DAYS_IN_MONTH[month - 1] + (1 if leap else 0)):
        raise ValueError(f"bad timestamp day: {ts!r}")
    if hour > 23 or minute > 59 or second > 59:
        raise ValueError(f"bad timestamp time: {ts!r}")
    # days since epoch via the civil-date algorithm
    y = year - (1 if month <= 2 else 0)
    era = (y if y >= 0 else y - 399) // 400
    yoe = y - era * 400
    doy = (153 * (month + (-3 if month > 2 else 9)) + 2) // 5 + day - 1
    doe = yoe * 365 + yoe // 4 - yoe // 100 + doy
    days = era * 146097 + doe - 719468
    return days * 86400 + hour * 3600 + minute * 60 + second


def format_iso_utc(epoch: int) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def seconds_of_day(epoch: int) -> int:
    return epoch % 86400
