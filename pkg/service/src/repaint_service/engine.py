"""Latent repainting engine.

The generative model here is a deterministic, self-contained stand-in that
keeps the real pipeline's structure: images are encoded into a coarse
latent grid (8x spatial reduction), a reverse loop walks a noise schedule
from seeded Gaussian noise toward a target conditioned on both the visible
region and the guidance image, and at EVERY step the known-region latents
are replaced by correspondingly-noised originals before the next step
(masked-blend sampling). The latent result is decoded, and preserved
pixels are restored exactly by pixel-level compositing. A pretrained
diffusion backbone can replace the target predictor without touching the
wire contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image

LATENT_FACTOR = 8
NATIVE_LIMIT = 512  # longer canvas side above this runs resized, then upsampled
DEFAULT_GUIDANCE_STRENGTH = 0.5
TEXTURE_SCALE = 0.05  # per-seed sample variation in the generated region


@dataclass(frozen=True)
class RepaintJob:
    canvas: np.ndarray    # (H, W, 3) uint8
    mask: np.ndarray      # (H, W) {0,1}, 1 = preserve
    guidance: np.ndarray  # (h, w, 3) uint8, any size
    seed: int
    steps: int
    prompt: str = ""
    guidance_strength: float = DEFAULT_GUIDANCE_STRENGTH


def run_job(job: RepaintJob) -> np.ndarray:
    """Repaint the job's canvas; output dimensions equal the input's."""
    canvas = job.canvas
    h, w = canvas.shape[:2]
    if max(h, w) > NATIVE_LIMIT:
        scale = NATIVE_LIMIT / max(h, w)
        rw, rh = max(1, round(w * scale)), max(1, round(h * scale))
        small = _resize_rgb(canvas, rw, rh)
        small_mask = (_resize_gray(job.mask.astype(np.float64), rw, rh) >= 0.5)
        generated = _denoise(small, small_mask.astype(np.uint8), job)
        generated = _resize_rgb(generated, w, h)
    else:
        generated = _denoise(canvas, job.mask, job)
    # full-resolution preserved pixels are restored bit-exactly
    keep = job.mask.astype(bool)[:, :, None]
    return np.where(keep, canvas, generated).astype(np.uint8)


def _denoise(canvas: np.ndarray, mask: np.ndarray, job: RepaintJob) -> np.ndarray:
    h, w = canvas.shape[:2]
    known_latent = _encode(canvas)
    latent_mask = _mask_to_latent(mask, known_latent.shape[:2])[:, :, None]

    guidance = _resize_rgb(job.guidance, w, h)
    strength = float(np.clip(job.guidance_strength, 0.0, 1.0))
    # visible-region pathway (canvas latents) fused with the image prompt
    target = (1.0 - strength) * known_latent + strength * _encode(guidance)

    rng = np.random.default_rng(job.seed)
    # each seed draws a different sample: a small seeded texture component
    # survives to the end of the reverse walk (the init noise cancels)
    target = target + TEXTURE_SCALE * rng.standard_normal(target.shape)
    alphas = _alpha_bar_schedule(job.steps)
    latent = rng.standard_normal(known_latent.shape)
    for t in range(job.steps - 1, -1, -1):
        ab_now = alphas[t + 1]
        ab_next = alphas[t]
        # predicted noise for the current state, aimed at the target
        eps = (latent - np.sqrt(ab_now) * target) / np.sqrt(1.0 - ab_now)
        unknown = np.sqrt(ab_next) * target + np.sqrt(1.0 - ab_next) * eps
        # masked blend: re-noise the known latents to this step's level
        known = np.sqrt(ab_next) * known_latent
        if ab_next < 1.0:
            known = known + np.sqrt(1.0 - ab_next) * rng.standard_normal(
                known_latent.shape
            )
        latent = latent_mask * known + (1.0 - latent_mask) * unknown
    return _decode(latent, w, h)


def _alpha_bar_schedule(steps: int) -> np.ndarray:
    """Cumulative signal fraction per index: 1 at 0 (clean), ~0 at steps."""
    ts = np.linspace(0.0, 1.0, steps + 1)
    return np.clip(np.cos(ts * np.pi / 2) ** 2, 1e-6, 1.0)


def _encode(img: np.ndarray) -> np.ndarray:
    """Area-mean pooling into the latent grid, values in [-1, 1]."""
    h, w = img.shape[:2]
    gh = -(-h // LATENT_FACTOR)
    gw = -(-w // LATENT_FACTOR)
    padded = np.pad(
        img.astype(np.float64) / 127.5 - 1.0,
        ((0, gh * LATENT_FACTOR - h), (0, gw * LATENT_FACTOR - w), (0, 0)),
        mode="edge",
    )
    return padded.reshape(gh, LATENT_FACTOR, gw, LATENT_FACTOR, 3).mean(axis=(1, 3))


def _decode(latent: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    up = _resize_channels(latent, out_w, out_h)
    return np.clip((up + 1.0) * 127.5, 0, 255).astype(np.uint8)


def _mask_to_latent(mask: np.ndarray, grid_shape) -> np.ndarray:
    """A latent cell counts as known when >= 0.5 of its pixels are preserved."""
    gh, gw = grid_shape
    h, w = mask.shape
    padded = np.pad(
        mask.astype(np.float64),
        ((0, gh * LATENT_FACTOR - h), (0, gw * LATENT_FACTOR - w)),
        mode="edge",
    )
    frac = padded.reshape(gh, LATENT_FACTOR, gw, LATENT_FACTOR).mean(axis=(1, 3))
    return (frac >= 0.5).astype(np.float64)


def _resize_rgb(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    im = Image.fromarray(img.astype(np.uint8), mode="RGB")
    return np.asarray(im.resize((out_w, out_h), Image.BILINEAR), dtype=np.uint8)


def _resize_gray(arr: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    im = Image.fromarray(arr.astype(np.float32), mode="F")
    return np.asarray(im.resize((out_w, out_h), Image.BILINEAR), dtype=np.float64)


def _resize_channels(arr: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    return np.stack(
        [_resize_gray(arr[:, :, c], out_w, out_h) for c in range(arr.shape[2])],
        axis=2,
    )
