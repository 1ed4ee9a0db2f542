/** Server-push event stream client.
 *
 * Speaks text/event-stream over fetch + ReadableStream so the same code
 * runs in the browser and in node tests. Tracks heartbeats, flags the
 * connection lost after three missed intervals, and reconnects with
 * Last-Event-ID so no event is missed or duplicated across drops.
 */

import type { StreamEvent } from "./types.js";

export interface SseFrame {
  event?: string;
  id?: string;
  data?: string;
}

/** Incremental parser: feed raw chunks, get completed frames. */
export class SseParser {
  private buffer = "";

  push(chunk: string): { frames: SseFrame[]; comments: number } {
    this.buffer += chunk;
    const frames: SseFrame[] = [];
    let comments = 0;
    let boundary: number;
    while ((boundary = this.buffer.indexOf("\n\n")) >= 0) {
      const block = this.buffer.slice(0, boundary);
      this.buffer = this.buffer.slice(boundary + 2);
      const frame: SseFrame = {};
      let sawField = false;
      for (const line of block.split("\n")) {
        if (line === "") continue;
        if (line.startsWith(":")) {
          comments += 1;
          continue;
        }
        const sep = line.indexOf(": ");
        if (sep < 0) continue;
        const key = line.slice(0, sep);
        const value = line.slice(sep + 2);
        if (key === "event") frame.event = value;
        else if (key === "id") frame.id = value;
        else if (key === "data") frame.data = (frame.data ?? "") + value;
        sawField = true;
      }
      if (sawField) frames.push(frame);
    }
    return { frames, comments };
  }
}

export function frameToEvent(frame: SseFrame): StreamEvent | null {
  if (!frame.event || !frame.id || !frame.data) return null;
  const doc = JSON.parse(frame.data) as {
    kind: StreamEvent["kind"];
    recorded_at: string;
    payload: Record<string, unknown>;
  };
  return {
    seq: Number(frame.id),
    kind: doc.kind,
    recorded_at: doc.recorded_at,
    payload: doc.payload,
  };
}

export interface StreamOptions {
  heartbeatSeconds?: number;
  backoffMs?: number;
  onEvent: (event: StreamEvent) => void;
  onStatus?: (status: "connecting" | "connected" | "disconnected") => void;
  lastEventId?: number;
}

/** Long-lived subscription with resume. stop() tears it down. */
export class StreamConnection {
  lastEventId: number;
  status: "connecting" | "connected" | "disconnected" = "connecting";
  private stopped = false;
  private controller: AbortController | null = null;
  private watchdog: ReturnType<typeof setInterval> | null = null;
  private lastActivity = 0;

  constructor(readonly base: string, readonly options: StreamOptions) {
    this.lastEventId = options.lastEventId ?? 0;
  }

  private setStatus(status: "connecting" | "connected" | "disconnected") {
    if (this.status !== status) {
      this.status = status;
      this.options.onStatus?.(status);
    }
  }

  /** Sever the transport without stopping: the watchdog notices the
   * silence and reconnects with resume (used by the drop tests). */
  dropTransport(): void {
    this.controller?.abort();
  }

  stop(): void {
    this.stopped = true;
    if (this.watchdog) clearInterval(this.watchdog);
    this.controller?.abort();
  }

  async run(): Promise<void> {
    const heartbeat = (this.options.heartbeatSeconds ?? 10) * 1000;
    this.watchdog = setInterval(() => {
      if (this.status === "connected" && Date.now() - this.lastActivity > 3 * heartbeat) {
        this.setStatus("disconnected");
        this.controller?.abort();
      }
    }, Math.max(heartbeat / 2, 50));
    while (!this.stopped) {
      try {
        await this.connectOnce();
      } catch {
        // fall through to reconnect
      }
      if (this.stopped) break;
      this.setStatus("disconnected");
      await new Promise((resolve) => setTimeout(resolve, this.options.backoffMs ?? 300));
      this.setStatus("connecting");
    }
  }

  private async connectOnce(): Promise<void> {
    this.controller = new AbortController();
    const response = await fetch(`${this.base}/api/stream`, {
      headers: { "Last-Event-ID": String(this.lastEventId) },
      signal: this.controller.signal,
    });
    if (!response.ok || !response.body) throw new Error(`stream HTTP ${response.status}`);
    this.setStatus("connected");
    this.lastActivity = Date.now();
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    const parser = new SseParser();
    for (;;) {
      const { value, done } = await reader.read();
      if (done) break;
      this.lastActivity = Date.now();
      const { frames } = parser.push(decoder.decode(value, { stream: true }));
      for (const frame of frames) {
        const event = frameToEvent(frame);
        if (event && event.seq > this.lastEventId) {
          this.lastEventId = event.seq;
          this.options.onEvent(event);
        }
      }
    }
  }
}
