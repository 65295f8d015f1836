"""FastAPI application: /repaint with serial execution and backpressure.

Jobs execute one at a time (the generative backend owns the accelerator);
concurrent requests queue up, and requests beyond a queue depth of 8 are
rejected with 429. /healthz serves 503 until the engine has warmed up.
"""

from __future__ import annotations

import json
import threading
from contextlib import asynccontextmanager

import anyio
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from . import engine
from .wire import SchemaError, encode_image, job_from_payload

MAX_QUEUE_DEPTH = 8


class AdmissionGate:
    """Serializes job execution and bounds how many callers may wait."""

    def __init__(self, max_waiting: int = MAX_QUEUE_DEPTH):
        self._run = threading.Semaphore(1)
        self._lock = threading.Lock()
        self._waiting = 0
        self.max_waiting = max_waiting

    def admit(self) -> bool:
        with self._lock:
            if self._waiting >= self.max_waiting:
                return False
            self._waiting += 1
        return True

    def run(self, fn):
        try:
            with self._run:
                return fn()
        finally:
            with self._lock:
                self._waiting -= 1


def _warm_up():
    # exercise the engine once so the first real request sees a
    # fully-initialized process
    import numpy as np

    canvas = np.zeros((16, 16, 3), dtype="uint8")
    mask = np.ones((16, 16), dtype="uint8")
    mask[4:8, 4:8] = 0
    engine.run_job(
        engine.RepaintJob(canvas=canvas, mask=mask, guidance=canvas, seed=0, steps=2)
    )


def create_app() -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        await anyio.to_thread.run_sync(_warm_up)
        app.state.ready = True  # healthz flips from 503 to 200
        yield
        app.state.ready = False

    app = FastAPI(title="repaint-service", lifespan=lifespan)
    app.state.ready = False
    app.state.gate = AdmissionGate()

    @app.get("/healthz")
    def healthz():
        if not app.state.ready:
            return PlainTextResponse("loading", status_code=503)
        return PlainTextResponse("ok")

    @app.post("/repaint")
    async def repaint(request: Request) -> Response:
        body = await request.body()
        try:
            payload = json.loads(body)
        except (ValueError, UnicodeDecodeError):
            return JSONResponse({"error": "malformed JSON body"}, status_code=400)
        try:
            job = job_from_payload(payload)
        except SchemaError as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)

        gate: AdmissionGate = app.state.gate
        if not gate.admit():
            return JSONResponse({"error": "queue full"}, status_code=429)
        try:
            result = await anyio.to_thread.run_sync(gate.run, lambda: engine.run_job(job))
        except Exception:  # model failure is opaque to callers
            return JSONResponse({"error": "internal failure"}, status_code=500)
        return JSONResponse({"image_png_b64": encode_image(result)})

    return app


app = create_app()
