"""Saliency maps: providers, binarization, centroid, and union width.

A saliency map is an ``(H, W)`` float64 array in [0, 1]; binarized
saliency is an ``(H, W)`` uint8 array of {0, 1}. Maps come either from a
grayscale file written by an external detector or from the built-in
spectral-residual detector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy import ndimage


@dataclass(frozen=True)
class SaliencyStats:
    """Column statistics of a binary saliency map.

    centroid_x is the mean x-coordinate of all salient pixels (width/2 when
    none are set); union_width counts columns containing at least one
    salient pixel; row_union is that column membership vector.
    """

    centroid_x: float
    union_width: int
    row_union: np.ndarray


def saliency_from_file(path, expect_w: int, expect_h: int) -> np.ndarray:
    """Read a single-channel 8-bit PNG as a saliency map (255 -> 1.0).

    Dimensions must match the paired image; mismatch or an unreadable file
    raises ValueError / the underlying I/O error.
    """
    try:
        with Image.open(path) as im:
            gray = im.convert("L")
            arr = np.asarray(gray, dtype=np.float64)
    except FileNotFoundError:
        raise
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise ValueError(f"{path}: cannot read saliency file ({exc})") from exc
    h, w = arr.shape
    if (w, h) != (expect_w, expect_h):
        raise ValueError(
            f"{path}: saliency is {w}x{h}, image is {expect_w}x{expect_h}"
        )
    return arr / 255.0


def spectral_residual_saliency(gray: np.ndarray) -> np.ndarray:
    """Classical spectral-residual saliency of a grayscale image.

    Works at a reduced scale (longer side 64): the log-amplitude spectrum
    minus its 3x3 box-filtered version is recombined with the original
    phase, inverse-transformed, squared, blurred (sigma 2.5), min-max
    normalized to [0, 1], and upscaled bilinearly to the input size.
    A constant image yields an all-zero map.
    """
    gray = np.asarray(gray, dtype=np.float64)
    h, w = gray.shape
    if h < 8 or w < 8:
        raise ValueError(f"image too small for saliency detection: {w}x{h}")
    if gray.max() == gray.min():
        return np.zeros((h, w))

    scale = 64.0 / max(h, w)
    sw, sh = max(1, round(w * scale)), max(1, round(h * scale))
    small = _resize_bilinear(gray, sw, sh)

    spectrum = np.fft.fft2(small)
    # log1p keeps exact spectral zeros (common in synthetic images) from
    # dominating the residual the way a bare log floor would.
    log_amp = np.log1p(np.abs(spectrum))
    residual = log_amp - ndimage.uniform_filter(log_amp, size=3)
    back = np.fft.ifft2(np.exp(residual + 1j * np.angle(spectrum)))
    sal = ndimage.gaussian_filter(np.abs(back) ** 2, sigma=2.5)

    lo, hi = sal.min(), sal.max()
    if hi - lo < 1e-12:
        return np.zeros((h, w))
    sal = (sal - lo) / (hi - lo)
    return np.clip(_resize_bilinear(sal, w, h), 0.0, 1.0)


def binarize(sal: np.ndarray) -> np.ndarray:
    """Threshold a saliency map at its mean (strictly greater than).

    A constant map binarizes to all zeros.
    """
    sal = np.asarray(sal, dtype=np.float64)
    return (sal > sal.mean()).astype(np.uint8)


def stats(bits: np.ndarray) -> SaliencyStats:
    """Centroid and union width of a binary saliency map."""
    bits = np.asarray(bits)
    row_union = bits.any(axis=0)
    ys, xs = np.nonzero(bits)
    centroid = float(xs.mean()) if xs.size else bits.shape[1] / 2.0
    return SaliencyStats(
        centroid_x=centroid,
        union_width=int(row_union.sum()),
        row_union=row_union.astype(np.uint8),
    )


def _resize_bilinear(arr: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    im = Image.fromarray(arr.astype(np.float32), mode="F")
    return np.asarray(im.resize((out_w, out_h), Image.BILINEAR), dtype=np.float64)
