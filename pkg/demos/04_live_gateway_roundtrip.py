"""Start the live gateway and drive it with a scripted WebSocket client.

The client plays the part of the browser panel: it receives the scene,
presses the virtual finger on the yellow object, holds, and releases,
printing every phase transition and a decimated view of the state stream.

Run:  python demos/04_live_gateway_roundtrip.py
"""
import asyncio
import json

from websockets.asyncio.client import connect

from airtap import default_config
from airtap.server import make_server


async def scripted_client(uri):
    async with connect(uri) as ws:
        scene = json.loads(await ws.recv())
        print("scene:", ", ".join(
            f"{o['color']} #{o['id']} {o['material']}" for o in scene["objects"]))

        async def finger(t_ms, x_mm, y_mm, down):
            await ws.send(json.dumps({"type": "finger", "t_ms": t_ms,
                                      "x_mm": x_mm, "y_mm": y_mm,
                                      "down": down}) + "\n")

        await finger(0.0, 80.0, 0.0, True)     # press inside yellow
        release_at = 250.0
        listen_until = 600.0
        loop = asyncio.get_running_loop()
        start = loop.time()
        released = False
        shown = 0
        while (loop.time() - start) * 1000 < listen_until:
            if not released and (loop.time() - start) * 1000 >= release_at:
                await finger(release_at, 80.0, 0.0, False)
                released = True
            try:
                raw = await asyncio.wait_for(ws.recv(), timeout=0.05)
            except (asyncio.TimeoutError, TimeoutError):
                continue
            msg = json.loads(raw)
            if msg["type"] == "transition":
                print(f"{msg['t_ms']:7.1f} ms  {msg['from']:>11} -> {msg['to']}")
            elif msg["type"] == "state" and shown % 12 == 0:
                print(f"{msg['t_ms']:7.1f} ms  state {msg['phase']:<11} "
                      f"amplitude {msg['amplitude']:.2f} "
                      f"offset {msg['offset_u_mm']:+.2f} mm")
            if msg["type"] == "state":
                shown += 1


async def main():
    config = default_config()
    async with make_server(config, port=0) as server:
        port = server.sockets[0].getsockname()[1]
        print(f"gateway on ws://127.0.0.1:{port}")
        await scripted_client(f"ws://127.0.0.1:{port}")


if __name__ == "__main__":
    asyncio.run(main())
