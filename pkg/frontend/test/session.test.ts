// SessionClient: frame log discipline, replay, reconnect, command sending.

import { describe, expect, it, vi } from "vitest";

import {
  buffersFromFrames,
  emptyBuffers,
  appendFrame,
  SessionClient,
} from "../src/session.js";
import { FakeSocket, makeFrame } from "./helpers.js";

function makeClient(events = {}) {
  const sockets: FakeSocket[] = [];
  const client = new SessionClient(
    "ws://test",
    "abc",
    (url) => {
      const socket = new FakeSocket(url);
      sockets.push(socket);
      return socket;
    },
    events,
    1, // fast reconnect for tests
  );
  return { client, sockets };
}

describe("SessionClient", () => {
  it("records frames in day order", () => {
    const { client, sockets } = makeClient();
    client.connect();
    sockets[0].open();
    sockets[0].push(makeFrame(1));
    sockets[0].push(makeFrame(2));
    sockets[0].push(makeFrame(3));
    expect(client.frames.map((f) => f.day)).toEqual([1, 2, 3]);
  });

  it("drops duplicate or stale frames on replay overlap", () => {
    const { client, sockets } = makeClient();
    client.connect();
    sockets[0].open();
    sockets[0].push(makeFrame(1));
    sockets[0].push(makeFrame(2));
    sockets[0].push(makeFrame(2));
    sockets[0].push(makeFrame(1));
    expect(client.frames.map((f) => f.day)).toEqual([1, 2]);
  });

  it("sends commands as protocol JSON", () => {
    const { client, sockets } = makeClient();
    client.connect();
    sockets[0].open();
    client.send("inject_infected", { n: 2 });
    expect(sockets[0].lastCommand()).toEqual({
      type: "command",
      kind: "inject_infected",
      n: 2,
    });
  });

  it("reports errors from the server", () => {
    const errors: string[] = [];
    const { client, sockets } = makeClient({
      error: (m: string) => errors.push(m),
    });
    client.connect();
    sockets[0].open();
    sockets[0].push({ type: "error", kind: "start", message: "nope" });
    expect(errors).toEqual(["nope"]);
    expect(client.lastError).toBe("nope");
  });

  it("reconnects from the last seen day", async () => {
    vi.useFakeTimers();
    const { client, sockets } = makeClient();
    client.connect();
    sockets[0].open();
    sockets[0].push(makeFrame(1));
    sockets[0].push(makeFrame(2));
    expect(sockets[0].url).toContain("last_seen=0");
    sockets[0].onclose?.(); // dropped by the network
    await vi.advanceTimersByTimeAsync(5);
    expect(sockets.length).toBe(2);
    expect(sockets[1].url).toContain("last_seen=2");
    vi.useRealTimers();
  });

  it("does not reconnect after an explicit close", async () => {
    vi.useFakeTimers();
    const { client, sockets } = makeClient();
    client.connect();
    sockets[0].open();
    client.close();
    await vi.advanceTimersByTimeAsync(50);
    expect(sockets.length).toBe(1);
    vi.useRealTimers();
  });
});

describe("chart buffers", () => {
  it("contain exactly the frames received, in order", () => {
    const frames = [makeFrame(1), makeFrame(2), makeFrame(3)];
    const buffers = emptyBuffers();
    frames.forEach((f) => appendFrame(buffers, f));
    expect(buffers.days).toEqual([1, 2, 3]);
    expect(buffers.trueInfected).toEqual([1, 2, 3]);
    expect(buffers.census.susceptible).toEqual([1999, 1998, 1997]);
  });

  it("replaying the frame log reproduces identical buffers", () => {
    const frames = [makeFrame(1), makeFrame(2), makeFrame(5, { lockdown: true })];
    const live = emptyBuffers();
    frames.forEach((f) => appendFrame(live, f));
    expect(buffersFromFrames(frames)).toEqual(live);
  });
});
