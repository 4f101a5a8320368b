"""Serve the experiment state stream for the browser control panel.

Starts the simulation in a background thread and exposes the WebSocket at
ws://127.0.0.1:8765/ws.  Pair it with the frontend dev server (see
frontend/README notes in the top-level README).
"""

import uvicorn

from culturesim.service import SimController, make_app


def main():
    controller = SimController(speedup=600.0)
    controller.start()
    try:
        uvicorn.run(make_app(controller), host="127.0.0.1", port=8765)
    finally:
        controller.stop()


if __name__ == "__main__":
    main()
