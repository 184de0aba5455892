// Session client: socket lifecycle, frame log, and derived chart buffers.
// The view is stateless beyond the frame log, so replaying the same frames
// reproduces identical buffers (reconnects replay from the last seen day).

import type {
  Command,
  CommandKind,
  Frame,
  ServerMessage,
} from "./protocol.js";

export type SocketFactory = (url: string) => WebSocketLike;

// minimal surface shared by browser WebSocket and the `ws` package
export interface WebSocketLike {
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  send(data: string): void;
  close(): void;
}

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface SessionEvents {
  frame?: (frame: Frame) => void;
  status?: (status: ConnectionStatus) => void;
  error?: (message: string) => void;
  ack?: (kind: string, day: number) => void;
}

export class SessionClient {
  frames: Frame[] = [];
  status: ConnectionStatus = "closed";
  lastError = "";

  private socket: WebSocketLike | null = null;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private closedByUser = false;

  constructor(
    private baseUrl: string,
    private sessionId: string,
    private makeSocket: SocketFactory,
    private events: SessionEvents = {},
    private reconnectDelayMs = 500,
  ) {}

  get lastFrame(): Frame | null {
    return this.frames.length ? this.frames[this.frames.length - 1] : null;
  }

  get lastSeenDay(): number {
    return this.lastFrame ? this.lastFrame.day : 0;
  }

  connect(): void {
    this.closedByUser = false;
    this.setStatus("connecting");
    const url = `${this.baseUrl}/session/${this.sessionId}?last_seen=${this.lastSeenDay}`;
    const socket = this.makeSocket(url);
    this.socket = socket;
    socket.onopen = () => this.setStatus("open");
    socket.onmessage = (ev) => this.handleMessage(String(ev.data));
    socket.onerror = () => {
      /* close follows; reconnect handles it */
    };
    socket.onclose = () => {
      this.setStatus("closed");
      if (!this.closedByUser) {
        this.reconnectTimer = setTimeout(
          () => this.connect(),
          this.reconnectDelayMs,
        );
      }
    };
  }

  close(): void {
    this.closedByUser = true;
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.socket?.close();
  }

  send(kind: CommandKind, payload: Record<string, unknown> = {}): void {
    const command: Command = { type: "command", kind, ...payload };
    if (!this.socket || this.status !== "open") {
      this.lastError = "not connected";
      this.events.error?.(this.lastError);
      return;
    }
    this.socket.send(JSON.stringify(command));
  }

  private handleMessage(raw: string): void {
    let message: ServerMessage;
    try {
      message = JSON.parse(raw) as ServerMessage;
    } catch {
      return;
    }
    if (message.type === "frame") {
      // replay safety: never duplicate or reorder days
      if (this.lastFrame && message.day <= this.lastFrame.day) return;
      this.frames.push(message);
      this.events.frame?.(message);
    } else if (message.type === "ack") {
      this.events.ack?.(message.kind, message.day);
    } else {
      this.lastError = message.message;
      this.events.error?.(message.message);
    }
  }

  private setStatus(status: ConnectionStatus): void {
    this.status = status;
    this.events.status?.(status);
  }
}

export interface ChartBuffers {
  days: number[];
  census: {
    susceptible: number[];
    incubating: number[];
    asymptomatic: number[];
    symptomatic: number[];
    recovered: number[];
  };
  trueInfected: number[];
  estProportional: number[];
  estPredictive: number[];
  dailyTests: number[];
  dailyDoses: number[];
  newInfections: number[];
}

export function emptyBuffers(): ChartBuffers {
  return {
    days: [],
    census: {
      susceptible: [],
      incubating: [],
      asymptomatic: [],
      symptomatic: [],
      recovered: [],
    },
    trueInfected: [],
    estProportional: [],
    estPredictive: [],
    dailyTests: [],
    dailyDoses: [],
    newInfections: [],
  };
}

export function appendFrame(buffers: ChartBuffers, frame: Frame): void {
  buffers.days.push(frame.day);
  buffers.census.susceptible.push(frame.census.susceptible);
  buffers.census.incubating.push(frame.census.incubating);
  buffers.census.asymptomatic.push(frame.census.asymptomatic);
  buffers.census.symptomatic.push(frame.census.symptomatic);
  buffers.census.recovered.push(frame.census.recovered);
  buffers.trueInfected.push(frame.estimates.true);
  buffers.estProportional.push(frame.estimates.proportional);
  buffers.estPredictive.push(frame.estimates.predictive);
  buffers.dailyTests.push(frame.tests_done);
  buffers.dailyDoses.push(frame.doses_given);
  buffers.newInfections.push(frame.new_infections);
}

export function buffersFromFrames(frames: Frame[]): ChartBuffers {
  const buffers = emptyBuffers();
  for (const frame of frames) appendFrame(buffers, frame);
  return buffers;
}
