"""Live session gateway: finger samples in, stimulus state out.

One WebSocket connection owns one TapSession. Messages are JSON, one per
text frame, tagged by a `type` field:

  inbound   {"type": "finger", "t_ms", "x_mm", "y_mm", "down"}
  outbound  {"type": "scene", "objects": [...]}          (once, on connect)
            {"type": "state", "t_ms", "phase", "object_id",
             "amplitude", "offset_u_mm", "offset_v_mm"}
            {"type": "transition", "t_ms", "from", "to", "object_id"}
            {"type": "error", "message"}

The session clock ticks at the control rate but anchors on the first
finger sample: tick n is reported at that sample's timestamp plus n tick
periods. Client timestamps are trusted: a queued sample applies at the
first tick at or after its own timestamp, so faithful replays land on
the same ticks as an offline render regardless of transport jitter. The
tick loop trails real time by a small holdback so in-flight samples
arrive before their tick is evaluated. Phase transitions go out
immediately; state updates are decimated to the wire rate. Nothing is
sent before the first sample (beyond the scene hello), so an idle client
costs no traffic.
"""
from __future__ import annotations

import asyncio
import json
import math
import time
from collections import deque
from dataclasses import dataclass, field as dc_field
from functools import partial
from typing import Deque, Optional

from websockets.asyncio.server import serve

from .config import AppConfig
from .engine import FingerState, TapSession, advance, drive_for, ingest_pointer


def scene_message(config: AppConfig) -> dict:
    return {
        "type": "scene",
        "objects": [
            {
                "id": obj.id,
                "rect_mm": [v * 1000.0 for v in obj.rect],
                "color": obj.color,
                "material": obj.material.value,
            }
            for obj in config.scene
        ],
    }


def state_message(t: float, session: TapSession) -> dict:
    out = drive_for(session, t)
    if out is None:
        amplitude, offset = 0.0, (0.0, 0.0)
    else:
        amplitude, offset = out[0].amplitude_scale, out[0].focus_offset
    return {
        "type": "state",
        "t_ms": t * 1000.0,
        "phase": session.phase.value,
        "object_id": session.active_object,
        "amplitude": amplitude,
        "offset_u_mm": offset[0] * 1000.0,
        "offset_v_mm": offset[1] * 1000.0,
    }


def transition_message(ev) -> dict:
    return {
        "type": "transition",
        "t_ms": ev.t * 1000.0,
        "from": ev.from_phase.value,
        "to": ev.to_phase.value,
        "object_id": ev.object_id,
    }


def parse_finger_message(msg: dict) -> FingerState:
    if msg.get("type") != "finger":
        raise ValueError(f"unsupported message type {msg.get('type')!r}")
    try:
        t_ms = float(msg["t_ms"])
        x_mm = float(msg["x_mm"])
        y_mm = float(msg["y_mm"])
        down = msg["down"]
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"malformed finger sample: {e}") from None
    if not isinstance(down, bool):
        raise ValueError("malformed finger sample: down must be a boolean")
    return FingerState((x_mm / 1000.0, y_mm / 1000.0), down, t_ms / 1000.0)


#: The tick loop evaluates ticks this far behind real time, so samples in
#: flight still land on the tick their timestamp names.
TICK_HOLDBACK_S = 0.008


@dataclass
class _LiveSession:
    """Per-connection state shared by the receiver and the tick loop."""

    session: TapSession
    pending: Deque[FingerState] = dc_field(default_factory=deque)
    epoch_mono: Optional[float] = None   # monotonic time of the first sample
    epoch_t: float = 0.0                 # that sample's timestamp (s)
    next_tick: int = 0

    def push(self, sample: FingerState):
        if self.epoch_mono is None:
            self.epoch_mono = time.monotonic()
            self.epoch_t = sample.t
        self.pending.append(sample)


async def _tick_loop(ws, live: _LiveSession, config: AppConfig):
    rate = config.control_rate
    decim = max(1, round(rate / config.wire_rate))
    interval = 1.0 / config.wire_rate
    while True:
        await asyncio.sleep(interval)
        if live.epoch_mono is None:
            continue
        # catch up every control tick that has aged past the holdback
        elapsed = time.monotonic() - live.epoch_mono - TICK_HOLDBACK_S
        target = math.floor(elapsed * rate)
        while live.next_tick <= target:
            n = live.next_tick
            live.next_tick += 1
            t = live.epoch_t + n / rate
            while live.pending and live.pending[0].t <= t:
                try:
                    ingest_pointer(live.session, live.pending.popleft())
                except ValueError as e:
                    await ws.send(json.dumps({"type": "error", "message": str(e)}) + "\n")
            for ev in advance(live.session, config.scene, t):
                await ws.send(json.dumps(transition_message(ev)) + "\n")
            if n % decim == 0:
                await ws.send(json.dumps(state_message(t, live.session)) + "\n")


async def _handle(ws, config: AppConfig):
    await ws.send(json.dumps(scene_message(config)) + "\n")
    live = _LiveSession(session=TapSession(profiles=config.profiles))
    ticker = asyncio.create_task(_tick_loop(ws, live, config))
    try:
        async for raw in ws:
            if isinstance(raw, bytes):
                raw = raw.decode("utf-8", errors="replace")
            for line in raw.splitlines():
                if not line.strip():
                    continue
                try:
                    sample = parse_finger_message(json.loads(line))
                except (json.JSONDecodeError, ValueError) as e:
                    await ws.send(json.dumps({"type": "error",
                                              "message": str(e)}) + "\n")
                    continue
                live.push(sample)
    finally:
        ticker.cancel()


def make_server(config: AppConfig, host: str = "127.0.0.1", port: int = 8765):
    """WebSocket server (async context manager); the session dies with the
    connection."""
    return serve(partial(_handle, config=config), host, port)


async def serve_forever(config: AppConfig, host: str = "127.0.0.1",
                        port: int = 8765, *, ready=None):
    async with make_server(config, host, port) as server:
        if ready is not None:
            ready(server)
        await server.serve_forever()
