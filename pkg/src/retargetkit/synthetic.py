"""Deterministic synthetic corpus for benchmarking and tests.

Each image carries one off-center salient rectangle and a sibling
``<stem>.saliency.png`` ground-truth mask. Two families are mixed:

* "calm": near-uniform background with a textured rectangle. Every
  carving method can route seams around the rectangle, so only uniform
  resampling pays a saliency cost.
* "busy": heavily textured background with a smooth rectangle interior.
  Plain gradient-driven carving tunnels through the cheap rectangle,
  while saliency-aware carving keeps avoiding it.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .raster import save_image

WIDTH, HEIGHT = 128, 64


def make_image(kind: str, rng: np.random.Generator):
    """One (image, saliency map in [0,1]) pair of the given family."""
    h, w = HEIGHT, WIDTH
    rect_w = int(rng.integers(24, 37))
    rect_h = int(rng.integers(28, 48))
    x0 = int(rng.integers(8, w - rect_w - 8))
    y0 = int(rng.integers(6, h - rect_h - 6))

    if kind == "calm":
        img = np.full((h, w, 3), 90.0)
        img += rng.normal(0.0, 1.5, (h, w, 3))
        img[y0 : y0 + rect_h, x0 : x0 + rect_w] = 180.0 + rng.normal(
            0.0, 25.0, (rect_h, rect_w, 3)
        )
    elif kind == "busy":
        img = rng.uniform(30.0, 220.0, (h, w, 3))
        img[y0 : y0 + rect_h, x0 : x0 + rect_w] = 200.0
    else:
        raise ValueError(f"unknown corpus family {kind!r}")

    sal = np.zeros((h, w))
    sal[y0 : y0 + rect_h, x0 : x0 + rect_w] = 1.0
    return np.clip(img, 0, 255).astype(np.uint8), sal


def make_corpus(directory, n_calm: int = 17, n_busy: int = 3, seed: int = 42):
    """Write the corpus (images plus saliency files); returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    paths = []
    kinds = ["calm"] * n_calm + ["busy"] * n_busy
    for i, kind in enumerate(kinds):
        img, sal = make_image(kind, rng)
        path = directory / f"{kind}_{i:02d}.png"
        save_image(img, path)
        sal_img = Image.fromarray((sal * 255).astype(np.uint8), mode="L")
        sal_img.save(directory / f"{path.stem}.saliency.png", format="PNG")
        paths.append(path)
    return paths
