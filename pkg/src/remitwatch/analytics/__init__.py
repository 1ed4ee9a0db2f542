from .query import (
    MAX_LIMIT,
    NUMERIC_FIELDS,
    Query,
    SummaryTable,
    drill_down,
    run_query,
    summarize,
)
from .stats import descriptive_stats, trend_line
from .report import (
    CHART_KINDS,
    MetadataAnnotation,
    ReportSpec,
    WorkingSet,
    annotate,
    create_working_set,
    dashboard_snapshot,
    generate_report,
    render_report_text,
)

__all__ = [
    "CHART_KINDS", "MAX_LIMIT", "MetadataAnnotation", "NUMERIC_FIELDS", "Query",
    "ReportSpec", "SummaryTable", "WorkingSet", "annotate", "create_working_set",
    "dashboard_snapshot", "descriptive_stats", "drill_down", "generate_report",
    "render_report_text", "run_query", "summarize", "trend_line",
]
