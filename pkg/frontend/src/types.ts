/** Payload shapes of the monitoring service API. The dashboard never
 * recomputes any number in these documents; it only projects them. */

export interface TransactionRecord {
  tx_hash: string;
  sender_id: string;
  sender_name: string;
  sender_address: string;
  sender_identification_number: string;
  sender_wallet: string;
  receiver_id: string;
  receiver_name: string;
  receiver_address: string;
  receiver_identification_number: string;
  receiver_wallet: string;
  amount_minor: number;
  currency: string;
  destination_currency: string;
  reason: string;
  timestamp: string;
  fee_minor: number;
  gas_fee_minor: number;
  block_height: number | null;
  label: string;
}

export interface RiskScore {
  tx_hash: string;
  model_id: string;
  probability: number;
  anomaly_score: number;
  tier: "low" | "medium" | "high";
}

export type AlertState = "open" | "acknowledged" | "escalated" | "closed";

export interface Alert {
  alert_id: string;
  rule_id: string;
  tx_hashes: string[];
  customer_id: string;
  fired_at: string;
  severity: "low" | "medium" | "high";
  state: AlertState;
  note: string;
  actions: string[];
  audit: [string, string, string, string][];
}

export type RuleKind =
  | "amount_threshold"
  | "velocity"
  | "structuring"
  | "score_threshold"
  | "anomaly";

export interface AlertRule {
  rule_id: string;
  name: string;
  kind: RuleKind;
  params: Record<string, number>;
  enabled: boolean;
  actions: string[];
}

export interface QueryPage {
  total: number;
  offset: number;
  limit: number;
  records: TransactionRecord[];
}

export interface CustomerHistory {
  customer_id: string;
  history: TransactionRecord[];
  stats: {
    amounts: DescriptiveStats | null;
    inter_arrival_seconds: DescriptiveStats | null;
  };
}

export interface DescriptiveStats {
  n: number;
  mean: number;
  median: number;
  std: number | null;
  min: number;
  max: number;
  q1: number;
  q3: number;
}

export interface DashboardPayload {
  tx_volume_per_hour: number[];
  alert_counts_by_severity: Record<string, number>;
  alert_counts_by_state: Record<string, number>;
  tier_distribution: Record<string, number>;
  top_corridors: { corridor: string; amount_minor: number; tx_count: number }[];
  model_metrics: {
    model_id: string;
    model_type: string;
    metrics: MetricsReport | null;
  } | null;
  totals: { transactions: number; alerts: number; customers: number };
}

export interface MetricsReport {
  accuracy: number | null;
  precision: number | null;
  recall: number | null;
  f1: number | null;
  roc_auc: number | null;
  pr_auc: number | null;
  [key: string]: unknown;
}

export interface PieSlice {
  category: string;
  count: number;
  share: number;
}

export type ChartData =
  | { kind: "pie"; category: string; slices: PieSlice[] }
  | { kind: "scatter" | "line" | "bar"; x: string; y: string; points: [unknown, unknown][] };

export interface ReportDocument {
  title: string;
  time_from: string | null;
  time_to: string | null;
  sections: (
    | { kind: "text"; text: string }
    | { kind: "summary"; table: { group_by: string[]; rows: Record<string, unknown>[]; total_records: number } }
    | { kind: "chart"; chart: ChartData }
  )[];
}

export type EventKind =
  | "tx_mined"
  | "tx_scored"
  | "alert_fired"
  | "alert_transitioned"
  | "rule_changed"
  | "model_registered"
  | "annotation_added";

export interface StreamEvent {
  seq: number;
  kind: EventKind;
  recorded_at: string;
  payload: Record<string, unknown>;
}

export interface ApiError {
  error: string;
  field: string | null;
}
