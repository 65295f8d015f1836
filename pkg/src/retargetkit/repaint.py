"""Repainting of mask-0 canvas regions, preserving mask-1 pixels exactly.

Two backends share one contract: a builtin iterative harmonic fill (so the
pipeline runs fully offline) and a remote image-guided diffusion service
speaking the JSON/base64-PNG wire protocol below. Whatever the backend
returns, the final output is composited at pixel level as
``mask * canvas + (1 - mask) * generated``, so preserved pixels are
bit-exact by construction.

Wire protocol (POST {endpoint}/repaint, application/json):
  request:  {"image_png_b64", "mask_png_b64" (1-bit PNG, 255=preserve),
             "guidance_png_b64", "seed", "steps", "prompt"}
  response: 200 {"image_png_b64"} with dimensions equal to the request
  GET {endpoint}/healthz -> 200 "ok"
"""

from __future__ import annotations

import base64
import io
import threading
import warnings
from dataclasses import dataclass, field

import numpy as np
import requests
from PIL import Image

MAX_SWEEPS = 2000
SWEEP_TOL = 0.1  # max per-pixel change, on the 0..255 scale (= 0.1/255 normalized)


class RepaintError(Exception):
    """Base class for repaint backend failures."""


class RemoteUnreachable(RepaintError):
    """The service could not be reached within the configured retries."""

    def __init__(self, endpoint: str, attempts: int, cause: Exception):
        super().__init__(f"{endpoint} unreachable after {attempts} attempt(s): {cause}")
        self.endpoint = endpoint
        self.attempts = attempts


class RemoteHttpError(RepaintError):
    """The service answered with an HTTP error status."""

    def __init__(self, endpoint: str, status: int, detail: str = ""):
        super().__init__(f"{endpoint} returned HTTP {status}: {detail}")
        self.status = status


class RemoteProtocolError(RepaintError):
    """The service response violates the wire contract."""


@dataclass(frozen=True)
class RepaintRequest:
    canvas: np.ndarray        # (H, W, 3) uint8 final canvas
    mask: np.ndarray          # (H, W) {0,1}, 1 = preserve
    guidance: np.ndarray      # original image; may differ in size
    seed: int = 0
    steps: int = 30
    prompt: str = ""


@dataclass(frozen=True)
class BackendConfig:
    kind: str = "builtin"     # "builtin" or "remote"
    endpoint: str | None = None
    timeout: float = 60.0
    retries: int = 2

    def __post_init__(self):
        if self.kind not in ("builtin", "remote"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote backend requires an endpoint")


# At most this many repaint requests are POSTed concurrently.
_remote_slots = threading.BoundedSemaphore(4)


def set_remote_concurrency(n: int) -> None:
    """Cap the number of simultaneous in-flight service requests."""
    global _remote_slots
    if n < 1:
        raise ValueError("concurrency cap must be >= 1")
    _remote_slots = threading.BoundedSemaphore(n)


def repaint(req: RepaintRequest, cfg: BackendConfig) -> np.ndarray:
    """Repaint mask-0 pixels with the configured backend.

    Mask-1 pixels of the result equal the canvas bit-exactly for every
    backend; an all-ones mask returns the canvas unchanged.
    """
    canvas = np.asarray(req.canvas)
    mask = np.asarray(req.mask)
    if canvas.shape[:2] != mask.shape:
        raise ValueError(f"canvas {canvas.shape[:2]} and mask {mask.shape} differ")
    if mask.all():
        return canvas.copy()
    if cfg.kind == "builtin":
        generated = builtin_inpaint(canvas, mask)
    else:
        generated = remote_repaint(req, cfg)
    return composite(canvas, mask, generated)


def composite(canvas: np.ndarray, mask: np.ndarray, generated: np.ndarray) -> np.ndarray:
    """Pixel-level blend: preserve mask-1 canvas pixels, keep the rest generated."""
    keep = np.asarray(mask, dtype=bool)[:, :, None]
    return np.where(keep, canvas, generated).astype(np.uint8)


def builtin_inpaint(canvas: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Fill mask-0 pixels by discrete Laplace relaxation, per channel.

    Unknown pixels iterate toward the average of their 4-neighbors (edge
    neighbors replicate) with mask-1 pixels held fixed, until the largest
    per-pixel change drops below 0.1/255 or 2000 sweeps run. Unknowns are
    initialized from the existing canvas content clamped to the known
    values' range, which keeps the maximum principle (fills never leave
    the known range) while letting well-seeded regions converge at once.
    A mask with no 1-bits fills with mid-gray 128 and warns.
    """
    canvas = np.asarray(canvas)
    mask = np.asarray(mask)
    known = mask.astype(bool)
    if not known.any():
        warnings.warn("repaint mask preserves nothing; filling with mid-gray")
        return np.full_like(canvas, 128)
    if known.all():
        return canvas.copy()

    work = canvas.astype(np.float64)
    unknown = ~known
    lo = work[known].min(axis=0)
    hi = work[known].max(axis=0)
    work[unknown] = np.clip(work[unknown], lo, hi)
    known3 = known[:, :, None]
    for _ in range(MAX_SWEEPS):
        padded = np.pad(work, ((1, 1), (1, 1), (0, 0)), mode="edge")
        avg = (
            padded[:-2, 1:-1] + padded[2:, 1:-1]
            + padded[1:-1, :-2] + padded[1:-1, 2:]
        ) / 4.0
        new = np.where(known3, work, avg)
        delta = np.abs(new - work)[unknown].max()
        work = new
        if delta < SWEEP_TOL:
            break
    return np.clip(np.rint(work), 0, 255).astype(np.uint8)


def remote_repaint(req: RepaintRequest, cfg: BackendConfig) -> np.ndarray:
    """POST the request to the repaint service and validate the response.

    Network failures are retried up to cfg.retries extra times and then
    raised as RemoteUnreachable; HTTP error statuses raise RemoteHttpError;
    malformed responses (bad JSON, undecodable or wrong-size image) raise
    RemoteProtocolError. The returned image is already composited.
    """
    if cfg.kind != "remote":
        raise ValueError("remote_repaint needs a remote BackendConfig")
    canvas = np.asarray(req.canvas)
    payload = {
        "image_png_b64": encode_png_b64(canvas),
        "mask_png_b64": encode_mask_png_b64(req.mask),
        "guidance_png_b64": encode_png_b64(np.asarray(req.guidance)),
        "seed": int(req.seed),
        "steps": int(req.steps),
        "prompt": req.prompt,
    }
    url = cfg.endpoint.rstrip("/") + "/repaint"
    attempts = cfg.retries + 1
    last_exc = None
    for _ in range(attempts):
        try:
            with _remote_slots:
                resp = requests.post(url, json=payload, timeout=cfg.timeout)
            break
        except (requests.ConnectionError, requests.Timeout) as exc:
            last_exc = exc
    else:
        raise RemoteUnreachable(cfg.endpoint, attempts, last_exc)

    if resp.status_code >= 400:
        raise RemoteHttpError(cfg.endpoint, resp.status_code, resp.text[:200])
    try:
        body = resp.json()
        encoded = body["image_png_b64"]
    except (ValueError, KeyError, TypeError) as exc:
        raise RemoteProtocolError(f"{cfg.endpoint}: malformed response body") from exc
    try:
        out = decode_png_b64(encoded)
    except Exception as exc:
        raise RemoteProtocolError(f"{cfg.endpoint}: response image undecodable") from exc
    if out.shape != canvas.shape:
        raise RemoteProtocolError(
            f"{cfg.endpoint}: response is {out.shape[1]}x{out.shape[0]}, "
            f"expected {canvas.shape[1]}x{canvas.shape[0]}"
        )
    return composite(canvas, req.mask, out)


def encode_png_b64(img: np.ndarray) -> str:
    """uint8 RGB array -> base64 PNG string."""
    buf = io.BytesIO()
    Image.fromarray(img.astype(np.uint8), mode="RGB").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def decode_png_b64(data: str) -> np.ndarray:
    """base64 PNG string -> (H, W, 3) uint8 RGB array."""
    im = Image.open(io.BytesIO(base64.b64decode(data)))
    return np.asarray(im.convert("RGB"), dtype=np.uint8)


def encode_mask_png_b64(mask: np.ndarray) -> str:
    """{0,1} mask -> base64 1-bit PNG (255 = preserve)."""
    arr = (np.asarray(mask, dtype=np.uint8) * 255)
    im = Image.fromarray(arr, mode="L").convert("1", dither=Image.NONE)
    buf = io.BytesIO()
    im.save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def decode_mask_png_b64(data: str) -> np.ndarray:
    """base64 mask PNG -> (H, W) uint8 {0,1} array (255/white = preserve)."""
    im = Image.open(io.BytesIO(base64.b64decode(data)))
    return (np.asarray(im.convert("L")) > 127).astype(np.uint8)
