/** Client-side rule form validation, mirroring the service's AlertRule
 * invariants so most mistakes surface before the round trip. The API
 * response stays authoritative; a 400 is still rendered inline. */

import type { AlertRule, RuleKind } from "./types.js";

export interface FieldError {
  field: string;
  message: string;
}

const REQUIRED_PARAMS: Record<RuleKind, string[]> = {
  amount_threshold: ["min_amount_minor"],
  velocity: ["max_tx", "window_seconds"],
  structuring: ["threshold_minor", "margin", "min_count", "window_seconds"],
  score_threshold: ["min_score"],
  anomaly: ["min_anomaly_score"],
};

const KNOWN_ACTIONS = ["notify-stream", "mark-review", "email"];

export function validateRuleForm(rule: AlertRule): FieldError[] {
  const errors: FieldError[] = [];
  if (!rule.rule_id.trim()) {
    errors.push({ field: "rule_id", message: "rule id is required" });
  }
  if (!rule.name.trim()) {
    errors.push({ field: "name", message: "name is required" });
  }
  const required = REQUIRED_PARAMS[rule.kind];
  if (!required) {
    errors.push({ field: "kind", message: `unknown rule kind ${rule.kind}` });
    return errors;
  }
  for (const param of required) {
    const value = rule.params[param];
    if (value === undefined || Number.isNaN(value)) {
      errors.push({ field: `params.${param}`, message: `${param} is required` });
    }
  }
  const margin = rule.params["margin"];
  if (rule.kind === "structuring" && margin !== undefined && !(margin > 0 && margin < 1)) {
    errors.push({ field: "params.margin", message: "margin must be in (0, 1)" });
  }
  const minCount = rule.params["min_count"];
  if (rule.kind === "structuring" && minCount !== undefined && minCount < 1) {
    errors.push({ field: "params.min_count", message: "min_count must be >= 1" });
  }
  const maxTx = rule.params["max_tx"];
  if (rule.kind === "velocity" && maxTx !== undefined && maxTx < 1) {
    errors.push({ field: "params.max_tx", message: "max_tx must be >= 1" });
  }
  for (const action of rule.actions) {
    if (!KNOWN_ACTIONS.includes(action)) {
      errors.push({ field: "actions", message: `unknown action ${action}` });
    }
  }
  return errors;
}
