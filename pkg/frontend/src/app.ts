// Dashboard assembly: control panel, indicator tiles, charts, live wiring.
// Every control maps 1:1 to a protocol command; charts are drawn from the
// frame stream only.

import { drawLines, drawStack } from "./charts.js";
import type { Frame } from "./protocol.js";
import {
  appendFrame,
  buffersFromFrames,
  ChartBuffers,
  emptyBuffers,
  SessionClient,
  SocketFactory,
} from "./session.js";

export interface AppOptions {
  httpBase: string;
  wsBase: string;
  socketFactory: SocketFactory;
  fetchImpl?: typeof fetch;
}

const INDICATORS: Array<[keyof Frame["cumulative"], string]> = [
  ["duration_days", "Duration"],
  ["serious_total", "Serious"],
  ["peak_daily_new_infections", "Peak"],
  ["infected_total", "Infected"],
  ["vaccines_total", "Vaccines"],
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
}

function numberInput(id: string, value: string, step = "1"): HTMLInputElement {
  const input = el("input", { id, type: "number", step, value });
  return input;
}

export class App {
  client: SessionClient | null = null;
  buffers: ChartBuffers = emptyBuffers();
  sessionId = "";

  private root!: HTMLElement;
  private statusBanner!: HTMLElement;
  private dayLabel!: HTMLElement;
  private lockdownBadge!: HTMLElement;
  private errorLabel!: HTMLElement;
  private tiles = new Map<string, HTMLElement>();
  private censusCanvas!: HTMLCanvasElement;
  private estimateCanvas!: HTMLCanvasElement;
  private activityCanvas!: HTMLCanvasElement;
  private inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();

  constructor(private options: AppOptions) {}

  mount(root: HTMLElement): void {
    this.root = root;
    root.innerHTML = "";
    root.appendChild(this.buildHeader());
    const layout = el("div", { class: "layout" });
    layout.appendChild(this.buildControls());
    layout.appendChild(this.buildCharts());
    root.appendChild(layout);
    this.renderStatus("closed");
  }

  async newSession(config: Record<string, unknown> = {}): Promise<string> {
    const fetchImpl = this.options.fetchImpl ?? fetch;
    const response = await fetchImpl(`${this.options.httpBase}/session`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(config),
    });
    if (!response.ok) {
      throw new Error(`session creation failed: ${response.status}`);
    }
    const body = (await response.json()) as { id: string };
    this.connectTo(body.id);
    await this.renderSnapshot();
    return body.id;
  }

  /** Header state for day 0 (and after reconnects); buffers stay
   * frame-stream-only. */
  async renderSnapshot(): Promise<void> {
    const fetchImpl = this.options.fetchImpl ?? fetch;
    const response = await fetchImpl(
      `${this.options.httpBase}/session/${this.sessionId}/snapshot`,
    );
    if (!response.ok) return;
    const frame = (await response.json()) as Frame;
    if (!this.client?.lastFrame) this.renderFrame(frame);
  }

  connectTo(sessionId: string): void {
    this.client?.close();
    this.sessionId = sessionId;
    this.buffers = emptyBuffers();
    this.client = new SessionClient(
      this.options.wsBase,
      sessionId,
      this.options.socketFactory,
      {
        frame: (frame) => this.onFrame(frame),
        status: (status) => this.renderStatus(status),
        error: (message) => {
          this.errorLabel.textContent = message;
        },
        ack: (kind) => {
          if (kind === "reset") {
            // days restart at 1, so drop the old frame log and resubscribe
            this.connectTo(this.sessionId);
            void this.renderSnapshot();
          }
        },
      },
    );
    this.client.connect();
  }

  /** Rebuild every chart buffer from the frame log alone. */
  replayFromLog(): void {
    if (!this.client) return;
    this.buffers = buffersFromFrames(this.client.frames);
    const last = this.client.lastFrame;
    if (last) this.renderFrame(last);
    this.redraw();
  }

  // -- rendering ------------------------------------------------------------

  private onFrame(frame: Frame): void {
    appendFrame(this.buffers, frame);
    this.renderFrame(frame);
    this.redraw();
  }

  private renderFrame(frame: Frame): void {
    this.dayLabel.textContent = `day ${frame.day}`;
    this.lockdownBadge.textContent = frame.lockdown ? "LOCKDOWN" : "open";
    this.lockdownBadge.className = frame.lockdown ? "badge on" : "badge";
    for (const [key] of INDICATORS) {
      const tile = this.tiles.get(key);
      if (tile) tile.textContent = String(frame.cumulative[key]);
    }
  }

  private renderStatus(status: string): void {
    this.statusBanner.textContent =
      status === "open"
        ? "connected"
        : status === "connecting"
          ? "connecting…"
          : "disconnected — retrying";
    this.statusBanner.className = `status ${status}`;
  }

  private redraw(): void {
    const days = this.buffers.days;
    drawStack(this.censusCanvas, days, [
      { label: "susceptible", color: "#9ecae1", values: this.buffers.census.susceptible },
      { label: "incubating", color: "#fdd0a2", values: this.buffers.census.incubating },
      { label: "asymptomatic", color: "#fdae6b", values: this.buffers.census.asymptomatic },
      { label: "symptomatic", color: "#e6550d", values: this.buffers.census.symptomatic },
      { label: "recovered", color: "#a1d99b", values: this.buffers.census.recovered },
    ]);
    drawLines(this.estimateCanvas, days, [
      { label: "true", color: "#000000", values: this.buffers.trueInfected },
      { label: "proportional", color: "#d62728", values: this.buffers.estProportional },
      { label: "predictive", color: "#1f77b4", values: this.buffers.estPredictive },
    ]);
    drawLines(this.activityCanvas, days, [
      { label: "new infections", color: "#e6550d", values: this.buffers.newInfections },
      { label: "tests", color: "#756bb1", values: this.buffers.dailyTests },
      { label: "doses", color: "#31a354", values: this.buffers.dailyDoses },
    ]);
  }

  // -- DOM ------------------------------------------------------------------

  private buildHeader(): HTMLElement {
    const header = el("header");
    header.appendChild(el("h1", {}, "episim decider dashboard"));
    this.statusBanner = el("div", { class: "status", "data-testid": "status" });
    this.dayLabel = el("div", { class: "day", "data-testid": "day" }, "day 0");
    this.lockdownBadge = el(
      "span",
      { class: "badge", "data-testid": "lockdown-badge" },
      "open",
    );
    this.errorLabel = el("div", { class: "error", "data-testid": "error" });
    header.append(this.statusBanner, this.dayLabel, this.lockdownBadge, this.errorLabel);
    const tiles = el("div", { class: "tiles" });
    for (const [key, label] of INDICATORS) {
      const tile = el("div", { class: "tile" });
      tile.appendChild(el("div", { class: "tile-label" }, label));
      const value = el("div", { class: "tile-value", "data-testid": `tile-${key}` }, "0");
      tile.appendChild(value);
      this.tiles.set(key, value);
      tiles.appendChild(tile);
    }
    header.appendChild(tiles);
    return header;
  }

  private buildCharts(): HTMLElement {
    const wrap = el("div", { class: "charts" });
    const mk = (title: string, testid: string): HTMLCanvasElement => {
      wrap.appendChild(el("h2", {}, title));
      const canvas = el("canvas", {
        width: "640",
        height: "200",
        "data-testid": testid,
      });
      wrap.appendChild(canvas);
      return canvas;
    };
    this.censusCanvas = mk("Population census", "census-chart");
    this.estimateCanvas = mk("True vs estimated infected", "estimates-chart");
    this.activityCanvas = mk("Daily activity", "activity-chart");
    return wrap;
  }

  private buildControls(): HTMLElement {
    const panel = el("div", { class: "controls" });

    const runRow = el("div", { class: "row" });
    const speed = numberInput("speed", "5", "1");
    this.inputs.set("speed", speed);
    runRow.append(
      this.button("start", "Start", () =>
        this.send("start", { days_per_second: Number(speed.value) }),
      ),
      this.button("pause", "Pause", () => this.send("pause")),
      el("label", { for: "speed" }, "days/s"),
      speed,
    );
    panel.appendChild(runRow);

    const stepRow = el("div", { class: "row" });
    const stepN = numberInput("step-n", "1");
    this.inputs.set("step-n", stepN);
    stepRow.append(
      this.button("step", "Step", () =>
        this.send("step", { n: Number(stepN.value) }),
      ),
      stepN,
      this.button("reset", "Reset", () => this.send("reset")),
    );
    panel.appendChild(stepRow);

    const actRow = el("div", { class: "row" });
    actRow.append(
      this.button("inject", "Introduce case", () =>
        this.send("inject_infected", { n: 1 }),
      ),
      this.button("lockdown", "Toggle lockdown", () =>
        this.send("toggle_lockdown"),
      ),
    );
    panel.appendChild(actRow);

    panel.appendChild(this.buildScreeningForm());
    panel.appendChild(this.buildVaccinationForm());
    return panel;
  }

  private buildScreeningForm(): HTMLElement {
    const form = el("fieldset", { class: "campaign" });
    form.appendChild(el("legend", {}, "Screening campaign"));
    const enabled = el("input", { id: "scr-enabled", type: "checkbox" });
    const tests = numberInput("scr-tests", "3");
    const trigger = numberInput("scr-trigger", "0", "0.01");
    const target = el("select", { id: "scr-target" });
    for (const value of ["random", "symptomatic", "elderly", "workers"]) {
      target.appendChild(el("option", { value }, value));
    }
    const sensitivity = numberInput("scr-sensitivity", "0.9", "0.05");
    const specificity = numberInput("scr-specificity", "0.9", "0.05");
    this.inputs.set("scr-enabled", enabled);
    this.inputs.set("scr-tests", tests);
    this.inputs.set("scr-trigger", trigger);
    this.inputs.set("scr-target", target);
    form.append(
      el("label", { for: "scr-enabled" }, "enabled"), enabled,
      el("label", { for: "scr-tests" }, "tests/day"), tests,
      el("label", { for: "scr-trigger" }, "trigger (sympt. share)"), trigger,
      el("label", { for: "scr-target" }, "target"), target,
      el("label", { for: "scr-sensitivity" }, "sensitivity"), sensitivity,
      el("label", { for: "scr-specificity" }, "specificity"), specificity,
      this.button("apply-screening", "Apply", () =>
        this.send("set_screening", {
          config: {
            enabled: enabled.checked,
            daily_tests: Number(tests.value),
            trigger_symptomatic_share: Number(trigger.value),
            target: target.value,
            params: {
              sensitivity: Number(sensitivity.value),
              specificity: Number(specificity.value),
            },
          },
        }),
      ),
    );
    return form;
  }

  private buildVaccinationForm(): HTMLElement {
    const form = el("fieldset", { class: "campaign" });
    form.appendChild(el("legend", {}, "Vaccination campaign"));
    const enabled = el("input", { id: "vax-enabled", type: "checkbox" });
    const doses = numberInput("vax-doses", "30");
    const trigger = numberInput("vax-trigger", "0", "0.01");
    const strategy = el("select", { id: "vax-strategy" });
    for (const value of ["random", "risk", "contacts"]) {
      strategy.appendChild(el("option", { value }, value));
    }
    const efficiency = numberInput("vax-efficiency", "0.9", "0.05");
    this.inputs.set("vax-enabled", enabled);
    this.inputs.set("vax-doses", doses);
    this.inputs.set("vax-trigger", trigger);
    this.inputs.set("vax-strategy", strategy);
    form.append(
      el("label", { for: "vax-enabled" }, "enabled"), enabled,
      el("label", { for: "vax-doses" }, "doses/day"), doses,
      el("label", { for: "vax-trigger" }, "trigger (infected share)"), trigger,
      el("label", { for: "vax-strategy" }, "strategy"), strategy,
      el("label", { for: "vax-efficiency" }, "efficiency"), efficiency,
      this.button("apply-vaccination", "Apply", () =>
        this.send("set_vaccination", {
          config: {
            enabled: enabled.checked,
            daily_doses: Number(doses.value),
            trigger_infected_share: Number(trigger.value),
            strategy: strategy.value,
            efficiency: Number(efficiency.value),
          },
        }),
      ),
    );
    return form;
  }

  private button(testid: string, label: string, onClick: () => void): HTMLElement {
    const node = el("button", { "data-testid": testid, type: "button" }, label);
    node.addEventListener("click", onClick);
    return node;
  }

  private send(kind: Parameters<SessionClient["send"]>[0], payload: Record<string, unknown> = {}): void {
    this.errorLabel.textContent = "";
    this.client?.send(kind, payload);
  }
}
