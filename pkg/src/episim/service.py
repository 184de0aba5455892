"""Live session server: one steerable simulation per session.

Wire protocol (line-delimited JSON over a WebSocket at /session/{id}):
client -> server   {"type": "command", "kind": "...", ...payload}
server -> client   {"type": "frame", ...}, {"type": "ack", ...},
                   {"type": "error", ...}

Commands are queued and applied between simulation days, in arrival
order, so every day's record reflects exactly the commands received
before that day began. A scripted session therefore reproduces the
headless engine's records bit for bit under the same seed and script.
"""

from __future__ import annotations

import asyncio
import uuid
from typing import Any

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from .config import (
    ConfigError,
    SimConfig,
    make_state,
    screening_config_from_dict,
    vaccination_config_from_dict,
)
from .dynamics import SimState, introduce_infected, set_lockdown, step
from .estimation import window_estimates

COMMAND_KINDS = (
    "start",
    "pause",
    "step",
    "reset",
    "set_screening",
    "set_vaccination",
    "inject_infected",
    "toggle_lockdown",
)

#: commands still accepted once no infectious agent remains
FINISHED_OK = ("inject_infected", "reset")

DEFAULT_DAYS_PER_SECOND = 5.0


class Session:
    """One live simulation plus its frame log and subscriber fan-out."""

    def __init__(self, session_id: str, cfg: SimConfig):
        self.id = session_id
        self.cfg = cfg
        self.running = False
        self.days_per_second = DEFAULT_DAYS_PER_SECOND
        self.commands: asyncio.Queue = asyncio.Queue()
        self.subscribers: list[asyncio.Queue] = []
        self.task: asyncio.Task | None = None
        self._reset_state(cfg)

    def _reset_state(self, cfg: SimConfig) -> None:
        self.cfg = cfg
        self.state: SimState = make_state(cfg)
        self.serious_total = 0
        self.vaccines_total = 0
        self.peak_new_infections = 0
        self.window: list[tuple[int, int]] = []  # (tests, positives) per day
        self.prev_estimates = (0.0, 0.0)
        self.frames: list[dict] = [self._build_frame(record=None)]

    # -- frame construction -------------------------------------------------

    def _build_frame(self, record) -> dict:
        state = self.state
        census = state.census()
        true_infected = census[1] + census[2] + census[3]
        if record is not None:
            self.window.append((record.tests_done, record.positives))
            if len(self.window) > 7:
                self.window.pop(0)
            prop, pred = window_estimates(
                sum(t for t, _ in self.window),
                sum(p for _, p in self.window),
                state.population_size,
                state.screening.params,
                self.prev_estimates,
            )
            self.prev_estimates = (prop, pred)
            self.serious_total += record.new_serious
            self.vaccines_total += record.doses_given
            self.peak_new_infections = max(
                self.peak_new_infections, record.new_infections
            )
        else:
            prop, pred = self.prev_estimates
        return {
            "type": "frame",
            "day": state.day,
            "census": {
                "susceptible": census[0],
                "incubating": census[1],
                "asymptomatic": census[2],
                "symptomatic": census[3],
                "recovered": census[4],
            },
            "new_infections": 0 if record is None else record.new_infections,
            "estimates": {
                "true": true_infected,
                "proportional": prop,
                "predictive": pred,
            },
            "doses_given": 0 if record is None else record.doses_given,
            "tests_done": 0 if record is None else record.tests_done,
            "lockdown": state.lockdown,
            "cumulative": {
                "duration_days": state.day,
                "serious_total": self.serious_total,
                "peak_daily_new_infections": self.peak_new_infections,
                "infected_total": state.cumulative_infections,
                "vaccines_total": self.vaccines_total,
            },
        }

    # -- lifecycle ----------------------------------------------------------

    def finished(self) -> bool:
        return self.state.infected_count() == 0

    def snapshot(self) -> dict:
        return self.frames[-1]

    def broadcast(self, message: dict) -> None:
        for q in self.subscribers:
            q.put_nowait(message)

    def _step_once(self) -> None:
        record = step(self.state)
        frame = self._build_frame(record)
        self.frames.append(frame)
        self.broadcast(frame)

    def submit(self, command: dict, reply_to: asyncio.Queue) -> None:
        self.commands.put_nowait((command, reply_to))

    async def run(self) -> None:
        """Session actor: applies queued commands between days, then steps."""
        while True:
            while not self.commands.empty():
                command, reply_to = self.commands.get_nowait()
                self._apply(command, reply_to)
            if self.running and self.finished():
                self.running = False  # nothing left to simulate
            if self.running and self.state.day < self.cfg.max_days:
                try:
                    self._step_once()
                except Exception as exc:  # keep the actor alive; surface it
                    self.running = False
                    self.broadcast(
                        {"type": "error", "kind": "step", "message": str(exc)}
                    )
                    continue
                try:
                    await asyncio.wait_for(
                        self._peek_command(), timeout=1.0 / self.days_per_second
                    )
                except asyncio.TimeoutError:
                    pass
            else:
                command, reply_to = await self.commands.get()
                self._apply(command, reply_to)

    async def _peek_command(self) -> None:
        # wait until a command arrives, leaving it queued for the main loop
        while self.commands.empty():
            await asyncio.sleep(0.005)

    # -- command application ------------------------------------------------

    def _apply(self, command: dict, reply_to: asyncio.Queue) -> None:
        kind = command.get("kind")

        def error(message: str) -> None:
            reply_to.put_nowait({"type": "error", "kind": kind, "message": message})

        def ack() -> None:
            reply_to.put_nowait({"type": "ack", "kind": kind, "day": self.state.day})

        if kind not in COMMAND_KINDS:
            error(f"unknown command kind {kind!r}")
            return
        if self.finished() and kind not in FINISHED_OK:
            error("session is finished (no infectious agents); "
                  "only inject_infected and reset are accepted")
            return
        try:
            if kind == "start":
                speed = command.get("days_per_second")
                if speed is not None:
                    speed = float(speed)
                    if speed <= 0:
                        raise ValueError("days_per_second must be > 0")
                    self.days_per_second = speed
                self.running = True
            elif kind == "pause":
                self.running = False
            elif kind == "step":
                n = int(command.get("n", 1))
                if n < 0:
                    raise ValueError("n must be >= 0")
                for _ in range(n):
                    if self.finished() or self.state.day >= self.cfg.max_days:
                        break
                    self._step_once()
            elif kind == "reset":
                payload = command.get("config")
                cfg = self.cfg if payload is None else SimConfig.from_dict(payload)
                cfg.validate()
                self.running = False
                self._reset_state(cfg)
            elif kind == "set_screening":
                self.state.screening = screening_config_from_dict(
                    command.get("config", {})
                )
            elif kind == "set_vaccination":
                self.state.vaccination = vaccination_config_from_dict(
                    command.get("config", {})
                )
            elif kind == "inject_infected":
                n = int(command.get("n", 1))
                if n < 0:
                    raise ValueError("n must be >= 0")
                introduce_infected(self.state, n)
            elif kind == "toggle_lockdown":
                set_lockdown(self.state, not self.state.lockdown)
        except (ConfigError, ValueError, TypeError) as exc:
            error(str(exc))
            return
        ack()


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="episim session server")
    sessions: dict[str, Session] = {}
    app.state.sessions = sessions

    @app.post("/session")
    async def create_session(body: dict[str, Any] | None = None):
        try:
            cfg = SimConfig.from_dict(body or {})
            cfg.validate()
        except (ConfigError, ValueError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        session_id = uuid.uuid4().hex[:12]
        session = Session(session_id, cfg)
        sessions[session_id] = session
        session.task = asyncio.create_task(session.run())
        return {"id": session_id}

    @app.get("/session/{session_id}/snapshot")
    async def snapshot(session_id: str):
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session.snapshot()

    @app.websocket("/session/{session_id}")
    async def session_socket(websocket: WebSocket, session_id: str):
        session = sessions.get(session_id)
        if session is None:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        try:
            last_seen = int(websocket.query_params.get("last_seen", 0))
        except ValueError:
            last_seen = 0
        outbound: asyncio.Queue = asyncio.Queue()
        backlog = [f for f in session.frames if f["day"] > last_seen]
        session.subscribers.append(outbound)

        async def writer():
            for frame in backlog:
                await websocket.send_json(frame)
            while True:
                await websocket.send_json(await outbound.get())

        async def reader():
            while True:
                message = await websocket.receive_json()
                if message.get("type") != "command":
                    outbound.put_nowait(
                        {
                            "type": "error",
                            "kind": message.get("kind"),
                            "message": "expected a message with type 'command'",
                        }
                    )
                    continue
                session.submit(message, outbound)

        writer_task = asyncio.create_task(writer())
        try:
            await reader()
        except WebSocketDisconnect:
            pass
        finally:
            writer_task.cancel()
            if outbound in session.subscribers:
                session.subscribers.remove(outbound)

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="dashboard")

    return app
