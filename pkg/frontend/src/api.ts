/** Typed client for the monitoring service HTTP API. Every mutation
 * waits for the service's response; there is no optimistic state. */

import type {
  Alert,
  AlertRule,
  ApiError,
  CustomerHistory,
  DashboardPayload,
  MetricsReport,
  QueryPage,
  ReportDocument,
  TransactionRecord,
} from "./types.js";

export class ApiRequestError extends Error {
  readonly status: number;
  readonly field: string | null;

  constructor(status: number, body: ApiError) {
    super(body.error);
    this.status = status;
    this.field = body.field;
  }
}

async function request<T>(base: string, method: string, path: string, body?: unknown): Promise<T> {
  const response = await fetch(base + path, {
    method,
    headers: body === undefined ? {} : { "Content-Type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  const text = await response.text();
  const doc = text ? JSON.parse(text) : {};
  if (!response.ok) {
    throw new ApiRequestError(response.status, doc as ApiError);
  }
  return doc as T;
}

export class ApiClient {
  constructor(readonly base: string) {}

  loadScenario(config: Record<string, unknown>, blocks?: number) {
    return request<{ scenario_id: string; transactions: number; blocks: number }>(
      this.base, "POST", "/api/scenario", blocks === undefined ? { config } : { config, blocks });
  }

  replay(data: string, speed: number | "max") {
    return request<{ transactions: number; alerts: number; seconds: number; tps: number }>(
      this.base, "POST", "/api/replay", { data, speed });
  }

  transactions(params: Record<string, string | number> = {}) {
    const search = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) search.set(key, String(value));
    const suffix = search.size ? `?${search.toString()}` : "";
    return request<QueryPage>(this.base, "GET", `/api/transactions${suffix}`);
  }

  transaction(txHash: string) {
    return request<TransactionRecord & { score?: Record<string, unknown> }>(
      this.base, "GET", `/api/transactions/${txHash}`);
  }

  customerHistory(customerId: string, from?: string, to?: string) {
    const search = new URLSearchParams();
    if (from) search.set("from", from);
    if (to) search.set("to", to);
    const suffix = search.size ? `?${search.toString()}` : "";
    return request<CustomerHistory>(this.base, "GET",
      `/api/customers/${customerId}/history${suffix}`);
  }

  trainModel(modelType: string, config: Record<string, unknown>, data: string) {
    return request<{ model_id: string; metrics: MetricsReport }>(
      this.base, "POST", "/api/models/train",
      { model_type: modelType, config, data });
  }

  modelMetrics(modelId: string) {
    return request<MetricsReport>(this.base, "GET", `/api/models/${modelId}/metrics`);
  }

  activateModel(modelId: string) {
    return request<{ model_id: string; active: boolean }>(
      this.base, "POST", `/api/models/${modelId}/activate`);
  }

  rules() {
    return request<{ rules: AlertRule[] }>(this.base, "GET", "/api/rules");
  }

  createRule(rule: AlertRule) {
    return request<AlertRule>(this.base, "POST", "/api/rules", rule);
  }

  updateRule(ruleId: string, rule: AlertRule) {
    return request<AlertRule>(this.base, "PUT", `/api/rules/${ruleId}`, rule);
  }

  alerts(state?: string) {
    const suffix = state ? `?state=${state}` : "";
    return request<{ alerts: Alert[] }>(this.base, "GET", `/api/alerts${suffix}`);
  }

  transitionAlert(alertId: string, state: string, note = "") {
    return request<Alert>(this.base, "POST", `/api/alerts/${alertId}/transition`,
      { state, note });
  }

  summary(groupBy: string, agg: string) {
    return request<{ group_by: string[]; rows: Record<string, unknown>[]; total_records: number }>(
      this.base, "GET", `/api/summary?group_by=${groupBy}&agg=${agg}`);
  }

  createReport(spec: Record<string, unknown>) {
    return request<{ report_id: string }>(this.base, "POST", "/api/reports", spec);
  }

  report(reportId: string) {
    return request<ReportDocument>(this.base, "GET", `/api/reports/${reportId}`);
  }

  dashboard() {
    return request<DashboardPayload>(this.base, "GET", "/api/dashboard");
  }
}
