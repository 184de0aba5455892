// Shared fakes for dashboard unit tests.

import type { Frame } from "../src/protocol.js";
import type { WebSocketLike } from "../src/session.js";

export class FakeSocket implements WebSocketLike {
  onopen: ((ev?: unknown) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  sent: string[] = [];
  closed = false;

  constructor(public url: string) {}

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  // test-side helpers
  open(): void {
    this.onopen?.();
  }

  push(message: unknown): void {
    this.onmessage?.({ data: JSON.stringify(message) });
  }

  lastCommand(): Record<string, unknown> {
    return JSON.parse(this.sent[this.sent.length - 1]);
  }
}

export function makeFrame(day: number, overrides: Partial<Frame> = {}): Frame {
  return {
    type: "frame",
    day,
    census: {
      susceptible: 2000 - day,
      incubating: day,
      asymptomatic: 0,
      symptomatic: 0,
      recovered: 0,
    },
    new_infections: day > 0 ? 1 : 0,
    estimates: { true: day, proportional: day * 1.5, predictive: day * 1.1 },
    doses_given: 0,
    tests_done: 3,
    lockdown: false,
    cumulative: {
      duration_days: day,
      serious_total: 0,
      peak_daily_new_infections: 1,
      infected_total: day + 1,
      vaccines_total: 0,
    },
    ...overrides,
  };
}
