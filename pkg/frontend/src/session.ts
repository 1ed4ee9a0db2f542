/** Session state: one reducer over stream events.
 *
 * The last-seen sequence number is monotone, so feeding a replayed
 * prefix after a reconnect changes nothing: the inbox and feed end up
 * identical to an uninterrupted session.
 */

import type { Alert, RiskScore, StreamEvent, TransactionRecord } from "./types.js";

export interface FeedRow {
  seq: number;
  record: TransactionRecord;
  score: RiskScore | null;
}

export interface SessionState {
  connection: "connecting" | "connected" | "disconnected";
  lastSeq: number;
  feed: FeedRow[];
  inbox: Map<string, Alert>;
  rules: Map<string, Record<string, unknown>>;
  selectedCustomer: string | null;
  selectedAlert: string | null;
  feedLimit: number;
}

export function initialSession(feedLimit = 200): SessionState {
  return {
    connection: "connecting",
    lastSeq: 0,
    feed: [],
    inbox: new Map(),
    rules: new Map(),
    selectedCustomer: null,
    selectedAlert: null,
    feedLimit,
  };
}

export function unacknowledgedCount(state: SessionState): number {
  let count = 0;
  for (const alert of state.inbox.values()) {
    if (alert.state === "open") count += 1;
  }
  return count;
}

/** Apply one stream event. Events at or below lastSeq are duplicates
 * from a resume and are ignored. */
export function applyEvent(state: SessionState, event: StreamEvent): SessionState {
  if (event.seq <= state.lastSeq) return state;
  state.lastSeq = event.seq;
  switch (event.kind) {
    case "tx_mined": {
      const record = (event.payload as { record: TransactionRecord }).record;
      state.feed.push({ seq: event.seq, record, score: null });
      if (state.feed.length > state.feedLimit) {
        state.feed.splice(0, state.feed.length - state.feedLimit);
      }
      break;
    }
    case "tx_scored": {
      const score = event.payload as unknown as RiskScore;
      for (let i = state.feed.length - 1; i >= 0; i -= 1) {
        const row = state.feed[i];
        if (row && row.record.tx_hash === score.tx_hash) {
          row.score = score;
          break;
        }
      }
      break;
    }
    case "alert_fired": {
      const alert = event.payload as unknown as Alert;
      state.inbox.set(alert.alert_id, alert);
      break;
    }
    case "alert_transitioned": {
      const change = event.payload as { alert_id: string; to: Alert["state"]; note?: string };
      const alert = state.inbox.get(change.alert_id);
      if (alert) {
        alert.state = change.to;
        if (change.note) alert.note = change.note;
      }
      break;
    }
    case "rule_changed": {
      const change = event.payload as {
        action: string;
        rule_id: string;
        rule?: Record<string, unknown>;
      };
      if (change.action === "delete") state.rules.delete(change.rule_id);
      else if (change.rule) state.rules.set(change.rule_id, change.rule);
      break;
    }
    default:
      break;
  }
  return state;
}

export function applyConnectionStatus(
  state: SessionState,
  status: SessionState["connection"],
): SessionState {
  state.connection = status;
  return state;
}
