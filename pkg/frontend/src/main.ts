/** Dashboard entry point: wires the stream, session state, and views to
 * the DOM. All state changes flow through the API; the UI renders
 * whatever the service acknowledges. */

import { ApiClient, ApiRequestError } from "./api.js";
import { StreamConnection } from "./sse.js";
import { applyConnectionStatus, applyEvent, initialSession } from "./session.js";
import {
  dashboardView,
  drillDownView,
  feedView,
  inboxView,
  reportView,
  statusBarView,
} from "./viewmodels.js";
import { validateRuleForm } from "./rules-form.js";
import type { AlertRule, RuleKind } from "./types.js";

const base = (window as unknown as { REMITWATCH_BASE?: string }).REMITWATCH_BASE
  ?? window.location.origin;
const api = new ApiClient(base);
const session = initialSession(100);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderStatus(): void {
  const view = statusBarView(session);
  el("status").textContent =
    `${view.connection} | seq ${view.lastSeq} | ${view.unacknowledged} open alerts`;
  el("status").className = `status ${view.connection}`;
}

function renderFeed(): void {
  const rows = feedView(session).slice(0, 40);
  el("feed").innerHTML = rows
    .map((row) => `<tr>
      <td><a href="#" data-customer="${row.sender}">${row.sender}</a></td>
      <td>${row.amount}</td>
      <td>${row.corridor}</td>
      <td>${row.tier ?? "-"}</td>
      <td>${row.probability === null ? "-" : row.probability.toFixed(3)}</td>
      <td>${row.timestamp}</td>
    </tr>`)
    .join("");
}

function renderInbox(): void {
  const rows = inboxView(session);
  el("inbox").innerHTML = rows
    .map((row) => `<tr>
      <td>${row.alertId}</td><td>${row.ruleId}</td><td>${row.customerId}</td>
      <td>${row.severity}</td><td>${row.state}</td><td>${row.txCount}</td>
      <td>
        ${row.canAcknowledge ? `<button data-alert="${row.alertId}" data-state="acknowledged">ack</button>` : ""}
        ${row.canEscalate ? `<button data-alert="${row.alertId}" data-state="escalated">escalate</button>` : ""}
        ${row.canClose ? `<button data-alert="${row.alertId}" data-state="closed">close</button>` : ""}
      </td>
    </tr>`)
    .join("");
}

function renderRules(): void {
  const rows = [...session.rules.values()] as unknown as AlertRule[];
  el("rules").innerHTML = rows
    .map((rule) => `<tr><td>${rule.rule_id}</td><td>${rule.name}</td>
      <td>${rule.kind}</td><td>${JSON.stringify(rule.params)}</td>
      <td>${rule.enabled ? "on" : "off"}</td></tr>`)
    .join("");
}

async function refreshDashboard(): Promise<void> {
  const view = dashboardView(await api.dashboard());
  const maxCount = Math.max(1, ...view.volumeBars.map((b) => b.count));
  el("volume").innerHTML = view.volumeBars
    .map((bar) => `<rect x="${bar.hour * 24}" y="${100 - (bar.count / maxCount) * 100}"
        width="20" height="${(bar.count / maxCount) * 100}"><title>${bar.hour}:00 - ${bar.count}</title></rect>`)
    .join("");
  el("totals").textContent =
    `${view.totals.transactions} tx | ${view.totals.alerts} alerts | ${view.totals.customers} customers`;
  el("corridors").innerHTML = view.corridors
    .map((c) => `<tr><td>${c.corridor}</td><td>${c.amount}</td><td>${c.txCount}</td></tr>`)
    .join("");
  el("model-card").textContent = view.modelCard
    ? `${view.modelCard.modelId} ROC-AUC ${view.modelCard.rocAuc?.toFixed(3) ?? "-"}`
    : "no active model";
}

async function openDrillDown(customerId: string): Promise<void> {
  const view = drillDownView(await api.customerHistory(customerId));
  el("drilldown-title").textContent = `Customer ${view.customerId}`;
  el("drilldown").innerHTML = view.rows
    .map((row) => `<tr><td>${row.timestamp}</td><td>${row.direction}</td><td>${row.amount}</td></tr>`)
    .join("");
  el("drilldown-stats").textContent = view.amountStats
    ? `amounts: mean ${view.amountStats["mean"]}, median ${view.amountStats["median"]}`
    : "no activity in range";
}

function ruleFromForm(): AlertRule {
  const kind = el<HTMLSelectElement>("rule-kind").value as RuleKind;
  const params: Record<string, number> = {};
  for (const input of document.querySelectorAll<HTMLInputElement>("[data-param]")) {
    if (input.value !== "" && !input.closest("[hidden]")) {
      params[input.dataset["param"]!] = Number(input.value);
    }
  }
  return {
    rule_id: el<HTMLInputElement>("rule-id").value,
    name: el<HTMLInputElement>("rule-name").value,
    kind,
    params,
    enabled: el<HTMLInputElement>("rule-enabled").checked,
    actions: ["notify-stream"],
  };
}

async function submitRule(event: Event): Promise<void> {
  event.preventDefault();
  const rule = ruleFromForm();
  const errorsNode = el("rule-errors");
  errorsNode.textContent = "";
  const clientErrors = validateRuleForm(rule);
  if (clientErrors.length) {
    errorsNode.textContent = clientErrors
      .map((e) => `${e.field}: ${e.message}`).join("; ");
    return;
  }
  try {
    await api.createRule(rule);
  } catch (error) {
    if (error instanceof ApiRequestError) {
      errorsNode.textContent = `${error.field ?? "form"}: ${error.message}`;
      return;
    }
    throw error;
  }
}

function wire(): void {
  el("inbox").addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    const alertId = target.dataset["alert"];
    const state = target.dataset["state"];
    if (alertId && state) {
      try {
        await api.transitionAlert(alertId, state);
      } catch (error) {
        if (error instanceof ApiRequestError) {
          el("inbox-errors").textContent =
            `${alertId}: ${error.status} ${error.message}`;
          return;
        }
        throw error;
      }
      el("inbox-errors").textContent = "";
    }
  });
  el("feed").addEventListener("click", (event) => {
    const customer = (event.target as HTMLElement).dataset["customer"];
    if (customer) {
      event.preventDefault();
      void openDrillDown(customer);
    }
  });
  el("rule-form").addEventListener("submit", (event) => void submitRule(event));
  el("refresh-dashboard").addEventListener("click", () => void refreshDashboard());
}

function renderAll(): void {
  renderStatus();
  renderFeed();
  renderInbox();
  renderRules();
}

async function start(): Promise<void> {
  wire();
  const existing = await api.alerts();
  for (const alert of existing.alerts) session.inbox.set(alert.alert_id, alert);
  const ruleList = await api.rules();
  for (const rule of ruleList.rules) session.rules.set(rule.rule_id, rule as unknown as Record<string, unknown>);
  renderAll();
  void refreshDashboard();
  const connection = new StreamConnection(base, {
    heartbeatSeconds: 10,
    onEvent: (event) => {
      applyEvent(session, event);
      renderAll();
    },
    onStatus: (status) => {
      applyConnectionStatus(session, status);
      renderStatus();
    },
  });
  void connection.run();
}

void start();
