"""Content-aware seam carving.

Gradient energy plus a saliency/spatial prior drives a dynamic-programming
minimum-seam search. Seam removal keeps original-coordinate bookkeeping (a
binary keep/delete mask over the source grid) so later stages can locate
deletion-dense regions and propagate saliency through the carve. The
number of seams allowed to touch salient pixels is capped by a budget
derived from the saliency width and the tolerable loss ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import to_gray
from .saliency import binarize, stats


@dataclass
class CarveState:
    """Mutable carving bookkeeping for one image.

    image/saliency are the current compacted arrays, index_map holds each
    surviving pixel's original column, and mask is the original-grid
    keep(1)/delete(0) record. Every mask row keeps an equal popcount.
    """

    image: np.ndarray
    saliency: np.ndarray
    index_map: np.ndarray
    mask: np.ndarray

    @property
    def width(self) -> int:
        return self.image.shape[1]


@dataclass
class CarveResult:
    image: np.ndarray
    mask: np.ndarray
    saliency_out: np.ndarray
    seams_removed: int
    salient_seams_removed: int
    halted: bool = False


def gradient_energy(gray: np.ndarray) -> np.ndarray:
    """|dI/dx| + |dI/dy|, max-normalized to [0, 1].

    Central differences in the interior, one-sided at the borders. The
    normalization keeps the gradient term commensurate with the [0, 1]
    saliency prior; an all-zero map stays all-zero.
    """
    gray = np.asarray(gray, dtype=np.float64)
    if gray.shape[0] < 2 or gray.shape[1] < 2:
        raise ValueError(f"need at least 2x2 image, got {gray.shape}")
    e = np.abs(np.gradient(gray, axis=1)) + np.abs(np.gradient(gray, axis=0))
    peak = e.max()
    return e / peak if peak > 0 else e


def content_energy(
    energy: np.ndarray, sal: np.ndarray, centroid_x: float
) -> np.ndarray:
    """Add the saliency prior weighted by distance from the centroid.

    out(x, y) = energy + sal * (1 - |x - centroid_x| / W). The weight
    decays from 1 at the centroid toward the image edges, so carving
    prefers the outer parts of salient regions.
    """
    energy = np.asarray(energy, dtype=np.float64)
    sal = np.asarray(sal, dtype=np.float64)
    if energy.shape != sal.shape:
        raise ValueError(f"shape mismatch: energy {energy.shape} vs saliency {sal.shape}")
    w = energy.shape[1]
    weight = 1.0 - np.abs(np.arange(w, dtype=np.float64) - centroid_x) / w
    return energy + sal * weight[None, :]


def min_seam(energy: np.ndarray) -> np.ndarray:
    """Minimum-total-energy vertical seam (one column index per row).

    DP recurrence: cum(y, x) = e(y, x) + min of the three upper neighbors.
    Ties break toward the smaller column, both at the bottom-row argmin and
    at every backtrack step, so results are fully deterministic.
    """
    energy = np.asarray(energy, dtype=np.float64)
    h, w = energy.shape
    if w < 2:
        raise ValueError("seam search needs width >= 2")
    cum = energy.copy()
    for y in range(1, h):
        prev = cum[y - 1]
        left = np.concatenate(([np.inf], prev[:-1]))
        right = np.concatenate((prev[1:], [np.inf]))
        cum[y] += np.minimum(np.minimum(left, prev), right)

    cols = np.empty(h, dtype=np.int64)
    cols[-1] = int(np.argmin(cum[-1]))
    for y in range(h - 2, -1, -1):
        j = cols[y + 1]
        lo = max(0, j - 1)
        cols[y] = lo + int(np.argmin(cum[y, lo : min(w, j + 2)]))
    return cols


def seam_energy(energy: np.ndarray, seam: np.ndarray) -> float:
    """Total energy along a seam."""
    return float(energy[np.arange(len(seam)), seam].sum())


def seam_crosses_saliency(seam: np.ndarray, bits: np.ndarray) -> bool:
    """True when the seam passes through any salient pixel."""
    seam = np.asarray(seam)
    if len(seam) != bits.shape[0]:
        raise ValueError("seam height does not match saliency height")
    return bool(bits[np.arange(len(seam)), seam].any())


def carve_state(img: np.ndarray, sal: np.ndarray) -> CarveState:
    """Fresh carving state for an image/saliency pair."""
    img = np.asarray(img)
    sal = np.asarray(sal, dtype=np.float64)
    h, w = img.shape[:2]
    if sal.shape != (h, w):
        raise ValueError(f"saliency {sal.shape} does not match image {(h, w)}")
    return CarveState(
        image=img.copy(),
        saliency=sal.copy(),
        index_map=np.tile(np.arange(w, dtype=np.int64), (h, 1)),
        mask=np.ones((h, w), dtype=np.uint8),
    )


def remove_seam(state: CarveState, seam: np.ndarray) -> CarveState:
    """Drop one pixel per row; record the original coordinates in the mask."""
    seam = np.asarray(seam, dtype=np.int64)
    h, w = state.image.shape[:2]
    _check_seam(seam, h, w)
    rows = np.arange(h)
    removed_orig = state.index_map[rows, seam]
    mask = state.mask.copy()
    mask[rows, removed_orig] = 0
    keep = np.ones((h, w), dtype=bool)
    keep[rows, seam] = False
    return CarveState(
        image=state.image[keep].reshape(h, w - 1, -1),
        saliency=state.saliency[keep].reshape(h, w - 1),
        index_map=state.index_map[keep].reshape(h, w - 1),
        mask=mask,
    )


def carve_to_width(
    img: np.ndarray, sal: np.ndarray, target_w: int, lam: float
) -> CarveResult:
    """Carve vertical seams until target width or the saliency budget binds.

    Energy (gradient + saliency prior) and the saliency statistics are
    recomputed after every removal. At most floor(lam * W_s) removed seams
    may cross the binarized saliency, W_s taken from the input map; when
    the next minimum seam would exceed that budget, carving halts early and
    the result reports the achieved width with ``halted=True``.
    """
    img = np.asarray(img)
    w0 = img.shape[1]
    if not 1 <= target_w <= w0:
        raise ValueError(f"target width {target_w} outside [1, {w0}]")
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"saliency loss ratio must be in [0, 1), got {lam}")

    budget = int(np.floor(lam * stats(binarize(sal)).union_width))
    state = carve_state(img, sal)
    salient_removed = 0
    halted = False
    while state.width > target_w:
        energy = gradient_energy(to_gray(state.image))
        bits = binarize(state.saliency)
        energy = content_energy(energy, state.saliency, stats(bits).centroid_x)
        seam = min_seam(energy)
        crossing = seam_crosses_saliency(seam, bits)
        if crossing and salient_removed >= budget:
            halted = True
            break
        state = remove_seam(state, seam)
        salient_removed += int(crossing)

    return CarveResult(
        image=state.image,
        mask=state.mask,
        saliency_out=state.saliency,
        seams_removed=w0 - state.width,
        salient_seams_removed=salient_removed,
        halted=halted,
    )


def compact_through_mask(values: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Keep only surviving pixels of an original-grid array, packed left.

    Every mask row must have the same popcount; the result has that width.
    """
    values = np.asarray(values)
    mask = np.asarray(mask)
    if values.shape[:2] != mask.shape:
        raise ValueError("values and mask dimensions differ")
    counts = mask.sum(axis=1)
    if counts.size and not (counts == counts[0]).all():
        raise ValueError("mask rows have unequal popcounts")
    new_w = int(counts[0]) if counts.size else 0
    keep = mask.astype(bool)
    if values.ndim == 3:
        return values[keep].reshape(mask.shape[0], new_w, values.shape[2])
    return values[keep].reshape(mask.shape[0], new_w)


def seam_overlay(img: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Original image with deleted pixels painted red, for inspection."""
    out = np.asarray(img).copy()
    out[np.asarray(mask) == 0] = (255, 0, 0)
    return out


def _check_seam(seam: np.ndarray, h: int, w: int) -> None:
    if seam.shape != (h,):
        raise ValueError(f"seam length {seam.shape} does not match height {h}")
    if seam.min() < 0 or seam.max() >= w:
        raise ValueError("seam column out of range")
    if h > 1 and np.abs(np.diff(seam)).max() > 1:
        raise ValueError("seam not connected: adjacent rows differ by more than 1")
