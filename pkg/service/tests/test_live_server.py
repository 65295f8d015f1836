"""End-to-end check over a real socket: uvicorn + plain HTTP."""

import threading
import time

import httpx
import numpy as np
import pytest
import uvicorn

from repaint_service import create_app

from test_service import b64_png, decode_image, make_payload


@pytest.fixture(scope="module")
def live_url():
    config = uvicorn.Config(create_app(), host="127.0.0.1", port=0, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("server did not start")
        time.sleep(0.02)
    host, port = server.servers[0].sockets[0].getsockname()[:2]
    yield f"http://{host}:{port}"
    server.should_exit = True
    thread.join(timeout=10)


def test_healthz_over_http(live_url):
    resp = httpx.get(f"{live_url}/healthz", timeout=10)
    assert resp.status_code == 200
    assert resp.text == "ok"


def test_repaint_over_http(live_url):
    payload, canvas, keep = make_payload(h=40, w=64, hole=((10, 30), (20, 44)), steps=4)
    resp = httpx.post(f"{live_url}/repaint", json=payload, timeout=60)
    assert resp.status_code == 200
    out = decode_image(resp.json()["image_png_b64"])
    assert out.shape == canvas.shape
    assert (out[keep] == canvas[keep]).all()


def test_schema_error_over_http(live_url):
    payload, _, _ = make_payload()
    payload["steps"] = 500
    resp = httpx.post(f"{live_url}/repaint", json=payload, timeout=10)
    assert resp.status_code == 422
    assert "error" in resp.json()
