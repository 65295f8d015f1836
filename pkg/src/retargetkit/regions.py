"""Repaint-region planning.

Carving leaves discontinuities where many neighboring pixels were deleted.
This module scores each surviving pixel by how many pixels survive inside
a sliding row window on the original grid, marks low-density survivors for
repainting, compacts the marks to retargeted coordinates, and merges in
the outpainting rows added by height expansion. Repaint masks use 1 for
"preserve exactly" and 0 for "regenerate".
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .plan import RetargetPlan, adjust_plan_for_width
from .carve import compact_through_mask


def abruptness(mask: np.ndarray, window: int) -> np.ndarray:
    """Survivor count inside the centered length-``window`` row window.

    Windows clamp at row borders; clamped counts are rescaled by
    window / (actual window size) so border pixels are comparable with
    interior ones. Returns float counts in [0, window].
    """
    if window % 2 == 0:
        raise ValueError(f"window length must be odd, got {window}")
    mask = np.asarray(mask, dtype=np.float64)
    raw = ndimage.convolve1d(mask, np.ones(window), axis=1, mode="constant")
    sizes = ndimage.convolve1d(
        np.ones(mask.shape[1]), np.ones(window), mode="constant"
    )
    return raw * (window / sizes)[None, :]


def repaint_field_from_carve(
    mask: np.ndarray, counts: np.ndarray, eta: int
) -> np.ndarray:
    """Per-survivor preserve/repaint marks, compacted to carved coordinates.

    A surviving pixel is preserved only when more than ``eta`` of its
    window survived (count > eta keeps it; count <= eta marks it 0 for
    repainting). Deleted pixels are dropped and the marks packed left,
    yielding a (carved width x H) binary field aligned with the carved
    image.
    """
    mask = np.asarray(mask)
    counts = np.asarray(counts)
    if mask.shape != counts.shape:
        raise ValueError("mask and abruptness dimensions differ")
    keep_marks = (counts > eta).astype(np.uint8)
    return compact_through_mask(keep_marks, mask)


def merge_outpaint(field: np.ndarray, plan: RetargetPlan) -> np.ndarray:
    """Final-canvas repaint mask: carved-field marks plus zeroed pad rows.

    If the field is wider than the plan (carving halted on the saliency
    budget), the plan is re-derived from the achieved width first. The
    field occupies rows [pad_top, pad_top + H); every padding row is 0.
    """
    field = np.asarray(field, dtype=np.uint8)
    h, w = field.shape
    plan = adjust_plan_for_width(plan, w, h)
    if plan.interior_h != h:
        raise ValueError(f"field height {h} does not fit plan interior {plan.interior_h}")
    out = np.zeros((plan.h_f, plan.w_f), dtype=np.uint8)
    out[plan.pad_top : plan.pad_top + h] = field
    return out


def place_on_canvas(img: np.ndarray, plan: RetargetPlan) -> np.ndarray:
    """Center the carved image vertically on the final canvas.

    Padding rows replicate the nearest image row. That content is seed
    only: those pixels are mask-0 and will be repainted, but the replica
    gives the repaint backend a plausible boundary condition.
    """
    img = np.asarray(img)
    h, w = img.shape[:2]
    if w != plan.w_f or h != plan.interior_h:
        raise ValueError(
            f"image {w}x{h} does not match plan interior {plan.w_f}x{plan.interior_h}"
        )
    if plan.pad_total == 0:
        return img.copy()
    top = np.tile(img[:1], (plan.pad_top, 1, 1))
    bottom = np.tile(img[-1:], (plan.pad_bottom, 1, 1))
    return np.concatenate([top, img, bottom], axis=0)


def background_field(bits: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Preserve surviving salient pixels, repaint surviving background.

    Ablation variant: instead of detecting abrupt pixels, the whole
    carved background is regenerated. Returns a (carved width x H) binary
    field like repaint_field_from_carve.
    """
    return compact_through_mask(np.asarray(bits, dtype=np.uint8), mask)


def dilate_repaint(field: np.ndarray, radius: int) -> np.ndarray:
    """Grow the repaint (0) region by ``radius`` pixels; 0 is a no-op."""
    if radius <= 0:
        return field
    struct = np.ones((2 * radius + 1, 2 * radius + 1), dtype=bool)
    kept = ndimage.binary_erosion(
        field.astype(bool), structure=struct, border_value=True
    )
    return kept.astype(np.uint8)
