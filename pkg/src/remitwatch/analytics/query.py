"""Ad hoc filtering, retrieval, grouping, and drill-down over immutable
record snapshots.

Records are the export-schema dicts. Every operation here is a pure
function of its snapshot; nothing mutates.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass, field

from ..chainsim.entities import EXPORT_FIELDS
from ..errors import BadOperatorForType, EmptySeries, UnknownCustomer, UnknownField

MAX_LIMIT = 10_000

NUMERIC_FIELDS = {"amount_minor", "fee_minor", "gas_fee_minor", "block_height"}
STRING_FIELDS = set(EXPORT_FIELDS) - NUMERIC_FIELDS

_OP_ALIASES = {
    "=": "=", "==": "=", "eq": "=",
    "!=": "!=", "≠": "!=", "ne": "!=",
    "<": "<", "lt": "<",
    "<=": "<=", "≤": "<=", "le": "<=",
    ">": ">", "gt": ">",
    ">=": ">=", "≥": ">=", "ge": ">=",
    "contains": "contains", "in": "in",
}

_COMPARATORS = {
    "=": operator.eq, "!=": operator.ne, "<": operator.lt,
    "<=": operator.le, ">": operator.gt, ">=": operator.ge,
}

_STRING_OPS = {"=", "!=", "contains", "in", "<", "<=", ">", ">="}
_NUMERIC_OPS = {"=", "!=", "<", "<=", ">", ">=", "in"}


@dataclass
class Query:
    filters: list = field(default_factory=list)   # (field, op, value)
    time_from: str | None = None                  # ISO-8601, inclusive
    time_to: str | None = None                    # ISO-8601, exclusive
    sort_field: str = "timestamp"
    sort_dir: str = "asc"
    limit: int = 100
    offset: int = 0

    def validate(self) -> None:
        for (name, op, value) in self.filters:
            canon = _canonical_op(op)
            if name not in EXPORT_FIELDS:
                raise UnknownField(f"unknown field {name!r}")
            if name in NUMERIC_FIELDS:
                if canon not in _NUMERIC_OPS:
                    raise BadOperatorForType(f"{op!r} not valid for numeric field {name!r}")
                if canon == "in":
                    if not isinstance(value, (list, tuple)):
                        raise BadOperatorForType("'in' needs a list of values")
                elif not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise BadOperatorForType(f"field {name!r} needs a numeric value")
            else:
                if canon not in _STRING_OPS:
                    raise BadOperatorForType(f"{op!r} not valid for string field {name!r}")
                if canon == "in":
                    if not isinstance(value, (list, tuple)):
                        raise BadOperatorForType("'in' needs a list of values")
                elif not isinstance(value, str):
                    raise BadOperatorForType(f"field {name!r} needs a string value")
        if self.sort_field not in EXPORT_FIELDS:
            raise UnknownField(f"unknown sort field {self.sort_field!r}")
        if self.sort_dir not in ("asc", "desc"):
            raise BadOperatorForType("sort direction must be 'asc' or 'desc'")
        if not (1 <= self.limit <= MAX_LIMIT):
            raise BadOperatorForType(f"limit must be in [1, {MAX_LIMIT}]")
        if self.offset < 0:
            raise BadOperatorForType("offset must be >= 0")

    def to_dict(self) -> dict:
        return {"filters": [list(f) for f in self.filters],
                "time_from": self.time_from, "time_to": self.time_to,
                "sort_field": self.sort_field, "sort_dir": self.sort_dir,
                "limit": self.limit, "offset": self.offset}

    @classmethod
    def from_dict(cls, doc) -> "Query":
        q = cls(filters=[tuple(f) for f in doc.get("filters", [])],
                time_from=doc.get("time_from"), time_to=doc.get("time_to"),
                sort_field=doc.get("sort_field", "timestamp"),
                sort_dir=doc.get("sort_dir", "asc"),
                limit=int(doc.get("limit", 100)),
                offset=int(doc.get("offset", 0)))
        q.validate()
        return q


def _canonical_op(op: str) -> str:
    try:
        return _OP_ALIASES[op]
    except KeyError:
        raise BadOperatorForType(f"unknown operator {op!r}") from None


def _matches(record: dict, name: str, op: str, value) -> bool:
    actual = record[name]
    if op == "contains":
        return isinstance(actual, str) and value in actual
    if op == "in":
        return actual in value
    if actual is None:
        return False
    return _COMPARATORS[op](actual, value)


def run_query(records, q: Query) -> dict:
    """Filter, sort, and page a record snapshot. Total order is
    (sort field, tx_hash) so pagination is stable."""
    q.validate()
    out = []
    for record in records:
        if q.time_from is not None and record["timestamp"] < q.time_from:
            continue
        if q.time_to is not None and record["timestamp"] >= q.time_to:
            continue
        ok = True
        for (name, op, value) in q.filters:
            if not _matches(record, name, _canonical_op(op), value):
                ok = False
                break
        if ok:
            out.append(record)
    out.sort(key=lambda r: r["tx_hash"])
    none_last = q.sort_dir == "asc"
    out.sort(key=lambda r: ((r[q.sort_field] is None) == none_last,
                            r[q.sort_field] if r[q.sort_field] is not None else 0),
             reverse=(q.sort_dir == "desc"))
    page = out[q.offset:q.offset + q.limit]
    return {"total": len(out), "offset": q.offset, "limit": q.limit,
            "records": page}


@dataclass
class SummaryTable:
    group_by: list
    rows: list
    total_records: int

    def to_dict(self) -> dict:
        return {"group_by": list(self.group_by), "rows": list(self.rows),
                "total_records": self.total_records}


_AGG_OPS = ("count", "sum", "mean", "min", "max")


def summarize(records, group_by, aggregates, calculated=None) -> SummaryTable:
    """Group records and aggregate. `aggregates` is a list of (op, field)
    with op in {count, sum, mean, min, max}; count ignores its field.
    `calculated` adds named arithmetic over the aggregate columns."""
    group_by = list(group_by)
    for name in group_by:
        if name not in EXPORT_FIELDS:
            raise UnknownField(f"unknown group field {name!r}")
    specs = []
    for op, fname in aggregates:
        if op not in _AGG_OPS:
            raise BadOperatorForType(f"unknown aggregate {op!r}")
        if op != "count":
            if fname not in EXPORT_FIELDS:
                raise UnknownField(f"unknown aggregate field {fname!r}")
            if fname not in NUMERIC_FIELDS:
                raise BadOperatorForType(f"aggregate {op!r} needs a numeric field")
        specs.append((op, fname))

    groups: dict[tuple, list] = {}
    for record in records:
        key = tuple(record[f] for f in group_by)
        groups.setdefault(key, []).append(record)

    rows = []
    for key in sorted(groups, key=lambda k: tuple(str(v) for v in k)):
        members = groups[key]
        row = {f: v for f, v in zip(group_by, key)}
        for op, fname in specs:
            label = "count" if op == "count" else f"{op}_{fname}"
            if op == "count":
                row[label] = len(members)
                continue
            values = [m[fname] for m in members if m[fname] is not None]
            if not values:
                row[label] = None
            elif op == "sum":
                row[label] = sum(values)
            elif op == "mean":
                row[label] = sum(values) / len(values)
            elif op == "min":
                row[label] = min(values)
            else:
                row[label] = max(values)
        for name, expr in (calculated or []):
            row[name] = _eval_calculated(expr, row)
        rows.append(row)
    return SummaryTable(group_by=group_by, rows=rows, total_records=len(records))


_ALLOWED_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub,
                  ast.Mult, ast.Div, ast.USub, ast.Constant, ast.Name, ast.Load)


def _eval_calculated(expr: str, row: dict):
    """Tiny safe arithmetic evaluator over aggregate column names."""
    tree = ast.parse(expr, mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise BadOperatorForType(f"calculated field: {type(node).__name__} not allowed")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float)):
                raise BadOperatorForType("calculated field: numeric constants only")
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in row:
                raise UnknownField(f"calculated field references unknown column {node.id!r}")
            return row[node.id] if row[node.id] is not None else 0.0
        if isinstance(node, ast.UnaryOp):
            return -ev(node.operand)
        left, right = ev(node.left), ev(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        return left / right if right != 0 else None

    return ev(tree)


def drill_down(records, customer_id: str, time_from=None, time_to=None) -> dict:
    """Full in-range history for one customer plus descriptive stats of
    amounts and inter-arrival seconds. The customer must exist somewhere
    in the snapshot."""
    from .stats import descriptive_stats

    known = any(r["sender_id"] == customer_id or r["receiver_id"] == customer_id
                for r in records)
    if not known:
        raise UnknownCustomer(f"unknown customer {customer_id!r}")
    history = [r for r in records
               if (r["sender_id"] == customer_id or r["receiver_id"] == customer_id)
               and (time_from is None or r["timestamp"] >= time_from)
               and (time_to is None or r["timestamp"] < time_to)]
    history.sort(key=lambda r: (r["timestamp"], r["tx_hash"]))
    amounts = [r["amount_minor"] for r in history]
    from .. import docio
    times = [docio.parse_iso_utc(r["timestamp"]) for r in history]
    gaps = [b - a for a, b in zip(times, times[1:])]
    try:
        amount_stats = descriptive_stats(amounts)
    except EmptySeries:
        amount_stats = None
    try:
        gap_stats = descriptive_stats(gaps)
    except EmptySeries:
        gap_stats = None
    return {"customer_id": customer_id, "history": history,
            "stats": {"amounts": amount_stats, "inter_arrival_seconds": gap_stats}}
