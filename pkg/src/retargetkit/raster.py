"""Image I/O and geometric primitives shared by all pipeline stages.

Conventions used throughout the package:

* RGB image: ``(H, W, 3)`` uint8 array, row-major.
* Grayscale image: ``(H, W)`` float64 luminance in [0, 255]. Values are
  kept unquantized so downstream gradients are not noise-floored.

All operations are pure functions on immutable inputs.
"""

from __future__ import annotations

import numpy as np
from PIL import Image, UnidentifiedImageError

GRAY_WEIGHTS = np.array([0.299, 0.587, 0.114])


class ImageFormatError(Exception):
    """File exists but is not decodable PNG or JPEG content."""


def load_image(path) -> np.ndarray:
    """Load a PNG or JPEG file as an (H, W, 3) uint8 RGB array.

    An alpha channel, palette, or grayscale encoding is converted to plain
    RGB (alpha is dropped, not composited). Raises FileNotFoundError for a
    missing file and ImageFormatError for unsupported or corrupt content.
    """
    try:
        with Image.open(path) as im:
            if im.format not in ("PNG", "JPEG"):
                raise ImageFormatError(
                    f"{path}: unsupported format {im.format!r}, need PNG or JPEG"
                )
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
    except FileNotFoundError:
        raise
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise ImageFormatError(f"{path}: cannot decode image ({exc})") from exc
    return arr


def save_image(img: np.ndarray, path) -> None:
    """Write an (H, W, 3) uint8 array as a PNG file (lossless round trip)."""
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise ValueError(f"expected (H, W, 3) uint8 image, got {img.shape} {img.dtype}")
    try:
        Image.fromarray(img, mode="RGB").save(path, format="PNG")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def to_gray(img: np.ndarray) -> np.ndarray:
    """Rec.601 luminance: 0.299 R + 0.587 G + 0.114 B, as float64."""
    return np.asarray(img, dtype=np.float64) @ GRAY_WEIGHTS


def transpose(img: np.ndarray) -> np.ndarray:
    """Swap rows and columns; works for (H, W) and (H, W, C) arrays."""
    return np.ascontiguousarray(np.swapaxes(img, 0, 1))
