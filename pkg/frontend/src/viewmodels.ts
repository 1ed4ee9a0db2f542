/** View models: pure projections of API payloads and session state.
 *
 * Nothing here computes a metric, a score, or an aggregate; every
 * displayed number is the service's number, formatted.
 */

import type { SessionState, FeedRow } from "./session.js";
import { unacknowledgedCount } from "./session.js";
import type {
  Alert,
  ChartData,
  CustomerHistory,
  DashboardPayload,
  ReportDocument,
} from "./types.js";

export function formatMinor(amountMinor: number, currency: string): string {
  const major = Math.trunc(amountMinor / 100);
  const cents = Math.abs(amountMinor % 100).toString().padStart(2, "0");
  return `${major}.${cents} ${currency}`;
}

export interface FeedViewRow {
  txHash: string;
  shortHash: string;
  timestamp: string;
  sender: string;
  receiver: string;
  amount: string;
  corridor: string;
  probability: number | null;
  tier: string | null;
  label: string;
}

export function feedView(state: SessionState): FeedViewRow[] {
  return state.feed
    .slice()
    .reverse()
    .map((row: FeedRow) => ({
      txHash: row.record.tx_hash,
      shortHash: row.record.tx_hash.slice(0, 10),
      timestamp: row.record.timestamp,
      sender: row.record.sender_id,
      receiver: row.record.receiver_id,
      amount: formatMinor(row.record.amount_minor, row.record.currency),
      corridor: `${row.record.currency}->${row.record.destination_currency}`,
      probability: row.score ? row.score.probability : null,
      tier: row.score ? row.score.tier : null,
      label: row.record.label,
    }));
}

export interface InboxViewRow {
  alertId: string;
  ruleId: string;
  customerId: string;
  firedAt: string;
  severity: string;
  state: string;
  txCount: number;
  note: string;
  canAcknowledge: boolean;
  canEscalate: boolean;
  canClose: boolean;
}

const TRANSITIONS: Record<string, string[]> = {
  open: ["acknowledged", "closed"],
  acknowledged: ["escalated", "closed"],
  escalated: [],
  closed: [],
};

export function inboxView(state: SessionState): InboxViewRow[] {
  const rows = [...state.inbox.values()].map(alertRow);
  rows.sort((a, b) => (a.alertId < b.alertId ? 1 : -1));
  return rows;
}

export function alertRow(alert: Alert): InboxViewRow {
  const allowed = TRANSITIONS[alert.state] ?? [];
  return {
    alertId: alert.alert_id,
    ruleId: alert.rule_id,
    customerId: alert.customer_id,
    firedAt: alert.fired_at,
    severity: alert.severity,
    state: alert.state,
    txCount: alert.tx_hashes.length,
    note: alert.note,
    canAcknowledge: allowed.includes("acknowledged"),
    canEscalate: allowed.includes("escalated"),
    canClose: allowed.includes("closed"),
  };
}

export interface StatusBarView {
  connection: string;
  lastSeq: number;
  unacknowledged: number;
}

export function statusBarView(state: SessionState): StatusBarView {
  return {
    connection: state.connection,
    lastSeq: state.lastSeq,
    unacknowledged: unacknowledgedCount(state),
  };
}

export interface DrillDownView {
  customerId: string;
  rows: { txHash: string; timestamp: string; amount: string; direction: "sent" | "received" }[];
  amountStats: CustomerHistory["stats"]["amounts"];
  gapStats: CustomerHistory["stats"]["inter_arrival_seconds"];
}

export function drillDownView(history: CustomerHistory): DrillDownView {
  return {
    customerId: history.customer_id,
    rows: history.history.map((record) => ({
      txHash: record.tx_hash,
      timestamp: record.timestamp,
      amount: formatMinor(record.amount_minor, record.currency),
      direction: record.sender_id === history.customer_id ? "sent" : "received",
    })),
    amountStats: history.stats.amounts,
    gapStats: history.stats.inter_arrival_seconds,
  };
}

export interface ChartBinding {
  kind: ChartData["kind"];
  title: string;
  series: { label: string; value: number }[] | { x: unknown; y: unknown }[];
}

export function chartBinding(chart: ChartData, title: string): ChartBinding {
  if (chart.kind === "pie") {
    return {
      kind: "pie",
      title,
      series: chart.slices.map((slice) => ({ label: slice.category, value: slice.share })),
    };
  }
  return {
    kind: chart.kind,
    title,
    series: chart.points.map(([x, y]) => ({ x, y })),
  };
}

export interface ReportView {
  title: string;
  blocks: (
    | { kind: "text"; text: string }
    | { kind: "table"; columns: string[]; rows: Record<string, unknown>[] }
    | { kind: "chart"; binding: ChartBinding }
  )[];
}

export function reportView(report: ReportDocument): ReportView {
  return {
    title: report.title,
    blocks: report.sections.map((section) => {
      if (section.kind === "text") return { kind: "text" as const, text: section.text };
      if (section.kind === "summary") {
        const first = section.table.rows[0];
        return {
          kind: "table" as const,
          columns: first ? Object.keys(first) : section.table.group_by,
          rows: section.table.rows,
        };
      }
      return { kind: "chart" as const, binding: chartBinding(section.chart, report.title) };
    }),
  };
}

export interface DashboardView {
  volumeBars: { hour: number; count: number }[];
  severity: { label: string; value: number }[];
  tiers: { label: string; value: number }[];
  corridors: { corridor: string; amount: string; txCount: number }[];
  modelCard: { modelId: string; modelType: string; rocAuc: number | null; prAuc: number | null } | null;
  totals: DashboardPayload["totals"];
}

export function dashboardView(payload: DashboardPayload): DashboardView {
  return {
    volumeBars: payload.tx_volume_per_hour.map((count, hour) => ({ hour, count })),
    severity: Object.entries(payload.alert_counts_by_severity)
      .map(([label, value]) => ({ label, value })),
    tiers: Object.entries(payload.tier_distribution)
      .map(([label, value]) => ({ label, value })),
    corridors: payload.top_corridors.map((c) => ({
      corridor: c.corridor,
      amount: formatMinor(c.amount_minor, c.corridor.slice(0, 3)),
      txCount: c.tx_count,
    })),
    modelCard: payload.model_metrics
      ? {
          modelId: payload.model_metrics.model_id,
          modelType: payload.model_metrics.model_type,
          rocAuc: payload.model_metrics.metrics?.roc_auc ?? null,
          prAuc: payload.model_metrics.metrics?.pr_auc ?? null,
        }
      : null,
    totals: payload.totals,
  };
}
