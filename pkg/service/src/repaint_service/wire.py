"""Wire-format decoding and validation for the repaint endpoint.

Request schema (single source of truth is the client's protocol):
  {"image_png_b64", "mask_png_b64" (1-bit PNG, 255 = preserve),
   "guidance_png_b64", "seed", "steps", "prompt",
   optional "guidance_strength"}
Malformed JSON is a 400; schema and constraint violations are 422s.
"""

from __future__ import annotations

import base64
import io

import numpy as np
from PIL import Image

from .engine import DEFAULT_GUIDANCE_STRENGTH, RepaintJob

MAX_STEPS = 100


class SchemaError(ValueError):
    """Request decoded as JSON but violates the repaint schema."""


def job_from_payload(payload) -> RepaintJob:
    if not isinstance(payload, dict):
        raise SchemaError("request body must be a JSON object")
    for key in ("image_png_b64", "mask_png_b64", "guidance_png_b64"):
        if not isinstance(payload.get(key), str):
            raise SchemaError(f"missing or non-string field {key!r}")

    canvas = _decode_rgb(payload["image_png_b64"], "image_png_b64")
    mask = _decode_mask(payload["mask_png_b64"])
    guidance = _decode_rgb(payload["guidance_png_b64"], "guidance_png_b64")

    if mask.shape != canvas.shape[:2]:
        raise SchemaError(
            f"mask is {mask.shape[1]}x{mask.shape[0]}, image is "
            f"{canvas.shape[1]}x{canvas.shape[0]}"
        )

    seed = payload.get("seed", 0)
    steps = payload.get("steps", 30)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise SchemaError("seed must be an integer")
    if not isinstance(steps, int) or isinstance(steps, bool):
        raise SchemaError("steps must be an integer")
    if not 1 <= steps <= MAX_STEPS:
        raise SchemaError(f"steps must be in [1, {MAX_STEPS}], got {steps}")
    prompt = payload.get("prompt", "")
    if not isinstance(prompt, str):
        raise SchemaError("prompt must be a string")
    strength = payload.get("guidance_strength", DEFAULT_GUIDANCE_STRENGTH)
    if not isinstance(strength, (int, float)) or isinstance(strength, bool):
        raise SchemaError("guidance_strength must be a number")
    if not 0.0 <= float(strength) <= 1.0:
        raise SchemaError("guidance_strength must be in [0, 1]")

    return RepaintJob(
        canvas=canvas, mask=mask, guidance=guidance,
        seed=seed, steps=steps, prompt=prompt,
        guidance_strength=float(strength),
    )


def encode_image(img: np.ndarray) -> str:
    buf = io.BytesIO()
    Image.fromarray(img.astype(np.uint8), mode="RGB").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def _decode_rgb(data: str, field: str) -> np.ndarray:
    try:
        im = Image.open(io.BytesIO(base64.b64decode(data, validate=True)))
        return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except Exception as exc:
        raise SchemaError(f"{field} is not a decodable base64 PNG: {exc}") from exc


def _decode_mask(data: str) -> np.ndarray:
    try:
        im = Image.open(io.BytesIO(base64.b64decode(data, validate=True)))
        return (np.asarray(im.convert("L")) > 127).astype(np.uint8)
    except Exception as exc:
        raise SchemaError(f"mask_png_b64 is not a decodable base64 PNG: {exc}") from exc
