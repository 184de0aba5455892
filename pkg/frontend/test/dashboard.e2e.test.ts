// Dashboard loop against a live session server: connect, stream 100 days,
// and drive the lockdown and introduce-case controls from the DOM.

import { spawn, ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { WebSocket as WsWebSocket } from "ws";

import { App } from "../src/app.js";

const PORT = 8931;
const HTTP = `http://127.0.0.1:${PORT}`;
const WS = `ws://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForServer(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${HTTP}/session`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: "{}",
      });
      if (response.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("server did not come up");
}

async function until(
  predicate: () => boolean,
  what: string,
  timeoutMs = 30_000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate()) return;
    await new Promise((r) => setTimeout(r, 25));
  }
  throw new Error(`timed out waiting for ${what}`);
}

function text(testid: string): string {
  return (
    document.querySelector(`[data-testid="${testid}"]`)?.textContent ?? ""
  );
}

function click(testid: string): void {
  (document.querySelector(`[data-testid="${testid}"]`) as HTMLElement).click();
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "episim.cli", "serve", "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 60_000);

afterAll(() => {
  server?.kill();
});

describe("dashboard loop against a live server", () => {
  it("streams 100 days and reacts to lockdown and introduce-case", async () => {
    const app = new App({
      httpBase: HTTP,
      wsBase: WS,
      socketFactory: (url) => new WsWebSocket(url) as never,
      fetchImpl: fetch,
    });
    app.mount(document.body);
    await app.newSession({ seed: 11 });
    await until(() => app.client!.status === "open", "socket open");

    // fresh session: day 0, everyone susceptible except the index case
    expect(text("day")).toBe("day 0");

    (document.getElementById("speed") as HTMLInputElement).value = "400";
    click("start");
    await until(() => app.client!.frames.length >= 100, "100 streamed days");
    click("pause");
    const settled = app.client!.frames.length;
    await new Promise((r) => setTimeout(r, 300));
    await until(
      () => app.client!.frames.length === app.buffers.days.length,
      "buffers caught up",
    );

    // frames arrive gapless from day 1 and the buffers mirror them exactly
    const days = app.client!.frames.map((f) => f.day);
    expect(days.length).toBeGreaterThanOrEqual(100);
    expect(days).toEqual(days.map((_, i) => i + 1));
    expect(app.buffers.days).toEqual(days);
    expect(Number(text("day").replace("day ", ""))).toBeGreaterThanOrEqual(100);
    expect(settled).toBeGreaterThanOrEqual(100);

    // lockdown control: badge flips and the next frame carries the flag
    const beforeLockdown = app.client!.lastFrame!;
    expect(beforeLockdown.lockdown).toBe(false);
    click("lockdown");
    click("step");
    await until(
      () => app.client!.lastFrame!.day === beforeLockdown.day + 1,
      "frame after lockdown",
    );
    const lockedFrame = app.client!.lastFrame!;
    expect(lockedFrame.lockdown).toBe(true);
    expect(lockedFrame.new_infections).toBe(0);
    expect(text("lockdown-badge")).toBe("LOCKDOWN");

    // introduce-case control: with the lockdown holding transmission at
    // zero, the infected counter advances by exactly the injected case
    const infectedBefore = lockedFrame.cumulative.infected_total;
    click("inject");
    click("step");
    await until(
      () => app.client!.lastFrame!.day === lockedFrame.day + 1,
      "frame after inject",
    );
    const injectedFrame = app.client!.lastFrame!;
    expect(injectedFrame.cumulative.infected_total).toBe(infectedBefore + 1);
    expect(text("tile-infected_total")).toBe(String(infectedBefore + 1));

    // release the lockdown again via the same control
    click("lockdown");
    click("step");
    await until(
      () => app.client!.lastFrame!.day === injectedFrame.day + 1,
      "frame after unlock",
    );
    expect(app.client!.lastFrame!.lockdown).toBe(false);
    expect(text("lockdown-badge")).toBe("open");

    app.client!.close();
  }, 60_000);
});
