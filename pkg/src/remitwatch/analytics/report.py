"""Report generation, chart data series, working sets, annotations, and
the predefined dashboard payload.

Reports resolve every section against one snapshot, so regenerating
with the same (spec, snapshot) reproduces the document byte for byte.
Charts come out as data series plus a kind; rendering belongs to the
dashboard.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import docio
from ..errors import InvalidSpec, UnknownField
from .query import Query, run_query, summarize

CHART_KINDS = ("scatter", "pie", "line", "bar")
SECTION_KINDS = ("text", "summary", "chart")


def _resolve_chart(chart: dict, records, section: str) -> dict:
    kind = chart.get("kind")
    if kind not in CHART_KINDS:
        raise InvalidSpec(section, f"chart kind must be one of {CHART_KINDS}")
    try:
        q = Query.from_dict(chart.get("query", {"limit": 10_000}))
    except Exception as exc:
        raise InvalidSpec(section, f"bad chart query: {exc}") from None
    rows = run_query(records, q)["records"]
    if kind == "pie":
        category = chart.get("category")
        if not category:
            raise InvalidSpec(section, "pie chart needs a category binding")
        counts: dict = {}
        for r in rows:
            counts[r[category]] = counts.get(r[category], 0) + 1
        total = sum(counts.values())
        slices = [{"category": k, "count": v,
                   "share": (v / total) if total else 0.0}
                  for k, v in sorted(counts.items(), key=lambda kv: str(kv[0]))]
        return {"kind": "pie", "category": category, "slices": slices}
    x_field, y_field = chart.get("x"), chart.get("y")
    if not x_field or not y_field:
        raise InvalidSpec(section, f"{kind} chart needs x and y bindings")
    from ..chainsim.entities import EXPORT_FIELDS
    for name in (x_field, y_field):
        if name not in EXPORT_FIELDS:
            raise InvalidSpec(section, f"unknown chart binding {name!r}")
    points = [[r[x_field], r[y_field]] for r in rows]
    if kind in ("line", "bar"):
        points.sort(key=lambda p: (str(p[0]), str(p[1])))
    return {"kind": kind, "x": x_field, "y": y_field, "points": points}


@dataclass
class ReportSpec:
    title: str
    time_from: str | None = None
    time_to: str | None = None
    sections: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"title": self.title, "time_from": self.time_from,
                "time_to": self.time_to, "sections": list(self.sections)}

    @classmethod
    def from_dict(cls, doc) -> "ReportSpec":
        if not isinstance(doc.get("title"), str) or not doc.get("title"):
            raise InvalidSpec("title", "report title is required")
        sections = doc.get("sections", [])
        if not isinstance(sections, list):
            raise InvalidSpec("sections", "must be a list")
        return cls(title=doc["title"], time_from=doc.get("time_from"),
                   time_to=doc.get("time_to"), sections=sections)


def generate_report(spec: ReportSpec, records) -> dict:
    """Resolve a report spec against one record snapshot."""
    in_range = [r for r in records
                if (spec.time_from is None or r["timestamp"] >= spec.time_from)
                and (spec.time_to is None or r["timestamp"] < spec.time_to)]
    body = []
    for i, section in enumerate(spec.sections):
        label = f"sections[{i}]"
        if not isinstance(section, dict) or section.get("kind") not in SECTION_KINDS:
            raise InvalidSpec(label, f"section kind must be one of {SECTION_KINDS}")
        kind = section["kind"]
        if kind == "text":
            if not isinstance(section.get("text"), str):
                raise InvalidSpec(label, "text section needs a 'text' string")
            body.append({"kind": "text", "text": section["text"]})
        elif kind == "summary":
            try:
                table = summarize(in_range, section.get("group_by", []),
                                  [tuple(a) for a in section.get("aggregates", [])],
                                  [tuple(c) for c in section.get("calculated", [])])
            except Exception as exc:
                raise InvalidSpec(label, f"bad summary: {exc}") from None
            body.append({"kind": "summary", "table": table.to_dict()})
        else:
            body.append({"kind": "chart",
                         "chart": _resolve_chart(section.get("chart", {}), in_range, label)})
    return {"title": spec.title, "time_from": spec.time_from,
            "time_to": spec.time_to, "sections": body}


def render_report_text(report: dict) -> str:
    """Portable plain-text rendering with embedded tables."""
    lines = [report["title"], "=" * len(report["title"]), ""]
    for section in report["sections"]:
        if section["kind"] == "text":
            lines += [section["text"], ""]
        elif section["kind"] == "summary":
            table = section["table"]
            if table["rows"]:
                cols = list(table["rows"][0])
                widths = [max(len(str(c)), max(len(str(r[c])) for r in table["rows"]))
                          for c in cols]
                lines.append("  ".join(str(c).ljust(w) for c, w in zip(cols, widths)))
                for r in table["rows"]:
                    lines.append("  ".join(str(r[c]).ljust(w) for c, w in zip(cols, widths)))
            lines.append(f"({table['total_records']} records)")
            lines.append("")
        else:
            chart = section["chart"]
            lines.append(f"[{chart['kind']} chart]")
            if chart["kind"] == "pie":
                for s in chart["slices"]:
                    lines.append(f"  {s['category']}: {s['share']:.4f}")
            else:
                lines.append(f"  {len(chart['points'])} points of {chart['x']} vs {chart['y']}")
            lines.append("")
    return "\n".join(lines)


@dataclass
class WorkingSet:
    """Named, immutable materialization of a query result."""

    name: str
    query: dict
    records: tuple
    created_at: str
    content_hash: str = ""

    def __post_init__(self):
        if not self.content_hash:
            self.content_hash = docio.doc_hash(list(self.records))


def create_working_set(records, name: str, q: Query, created_at: str) -> WorkingSet:
    page = run_query(records, q)
    return WorkingSet(name=name, query=q.to_dict(),
                      records=tuple(dict(r) for r in page["records"]),
                      created_at=created_at)


@dataclass
class MetadataAnnotation:
    target_kind: str     # transaction | customer | alert | report | model
    target_id: str
    key: str
    value: str
    author: str
    created_at: str

    def to_dict(self) -> dict:
        return {"target_kind": self.target_kind, "target_id": self.target_id,
                "key": self.key, "value": self.value, "author": self.author,
                "created_at": self.created_at}

    @classmethod
    def from_dict(cls, doc) -> "MetadataAnnotation":
        return cls(**{k: doc[k] for k in ("target_kind", "target_id", "key",
                                          "value", "author", "created_at")})


def annotate(target_exists, annotation: MetadataAnnotation) -> MetadataAnnotation:
    """Attach metadata; `target_exists(kind, id)` is the existence oracle."""
    if not target_exists(annotation.target_kind, annotation.target_id):
        raise UnknownField(
            f"annotation target {annotation.target_kind}:{annotation.target_id} not found")
    return annotation


def dashboard_snapshot(records, alerts=(), scores=(), model_metrics=None,
                       customers_count=None) -> dict:
    """The predefined operational display payload."""
    volume = [0] * 24
    corridor_amount: dict[str, int] = {}
    corridor_count: dict[str, int] = {}
    for r in records:
        hour = int(r["timestamp"][11:13])
        volume[hour] += 1
        key = f"{r['currency']}->{r['destination_currency']}"
        corridor_amount[key] = corridor_amount.get(key, 0) + r["amount_minor"]
        corridor_count[key] = corridor_count.get(key, 0) + 1
    top = sorted(corridor_amount.items(), key=lambda kv: (-kv[1], kv[0]))[:10]
    severity_counts = {"low": 0, "medium": 0, "high": 0}
    state_counts = {"open": 0, "acknowledged": 0, "escalated": 0, "closed": 0}
    for a in alerts:
        severity_counts[a["severity"]] = severity_counts.get(a["severity"], 0) + 1
        state_counts[a["state"]] = state_counts.get(a["state"], 0) + 1
    tiers = {"low": 0, "medium": 0, "high": 0}
    for s in scores:
        tiers[s["tier"]] = tiers.get(s["tier"], 0) + 1
    sender_ids = {r["sender_id"] for r in records}
    return {
        "tx_volume_per_hour": volume,
        "alert_counts_by_severity": severity_counts,
        "alert_counts_by_state": state_counts,
        "tier_distribution": tiers,
        "top_corridors": [{"corridor": k, "amount_minor": v,
                           "tx_count": corridor_count[k]} for k, v in top],
        "model_metrics": model_metrics,
        "totals": {"transactions": len(records), "alerts": len(list(alerts)),
                   "customers": customers_count if customers_count is not None
                   else len(sender_ids)},
    }
