"""Aspect-ratio planning: target width, final canvas size, padding split.

Planning is always phrased for the width-shrinking case; when the height
must shrink instead, the caller transposes the image first (and the plan's
orientation records that). The final width honors a floor derived from the
saliency width and the tolerable loss ratio; when that floor exceeds the
ratio-exact width, the extra height is padded evenly top and bottom and
later repainted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class RetargetParams:
    """Pipeline parameters; defaults match the reference configuration."""

    ratio: float
    lam: float = 0.3
    window: int = 25
    eta: int = 15

    def __post_init__(self):
        if self.ratio <= 0:
            raise ValueError(f"ratio must be positive, got {self.ratio}")
        if not 0.0 <= self.lam < 1.0:
            raise ValueError(f"lam must be in [0, 1), got {self.lam}")
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        if not 0 < self.eta <= self.window:
            raise ValueError(f"eta must be in (0, window], got {self.eta}")


@dataclass(frozen=True)
class RetargetPlan:
    """Canvas geometry for one retargeting run (width-shrinking frame)."""

    orientation: str  # "columns" (shrink width) or "rows" (ran transposed)
    ratio: float      # effective width/height ratio in this frame
    w_t: int          # ratio-exact target width
    w_f: int          # final canvas width (>= w_t when the saliency floor binds)
    h_f: int          # final canvas height
    pad_top: int
    pad_bottom: int

    @property
    def pad_total(self) -> int:
        return self.pad_top + self.pad_bottom

    @property
    def interior_h(self) -> int:
        return self.h_f - self.pad_total


def choose_orientation(w: int, h: int, ratio: float) -> str:
    """'columns' when the width must shrink, else 'rows' (transpose first)."""
    return "columns" if ratio < w / h else "rows"


def make_plan(
    w: int, h: int, saliency_width: int, params: RetargetParams,
    orientation: str = "columns",
) -> RetargetPlan:
    """Plan the final canvas for an image already in the columns frame.

    w_t = round(h * ratio). The final width is ceil(W_s * (1 - lam)) when
    that exceeds w_t (never discard more than the tolerable share of the
    salient region), else w_t; it is clamped to the original width. The
    final height round(w_f / ratio) is never below h (rows are never
    cropped); any excess is split evenly, odd row to the bottom.
    """
    r = params.ratio
    w_t = _round_half_up(h * r)
    floor_w = saliency_width * (1.0 - params.lam)
    w_f = math.ceil(floor_w) if floor_w > w_t else w_t
    w_f = min(w_f, w)
    return _finish_plan(orientation, r, w_t, w_f, h)


def adjust_plan_for_width(plan: RetargetPlan, achieved_w: int, h: int) -> RetargetPlan:
    """Re-derive the canvas from the width carving actually achieved.

    Used when the saliency budget halted carving above w_f; the height and
    padding are recomputed so the canvas ratio stays within rounding slack.
    """
    if achieved_w == plan.w_f:
        return plan
    if achieved_w < plan.w_f:
        raise ValueError(f"achieved width {achieved_w} below planned {plan.w_f}")
    return _finish_plan(plan.orientation, plan.ratio, plan.w_t, achieved_w, h)


def _finish_plan(orientation, ratio, w_t, w_f, h) -> RetargetPlan:
    h_f = max(h, _round_half_up(w_f / ratio))
    pad_total = h_f - h
    pad_top = pad_total // 2
    return RetargetPlan(
        orientation=orientation,
        ratio=ratio,
        w_t=w_t,
        w_f=w_f,
        h_f=h_f,
        pad_top=pad_top,
        pad_bottom=pad_total - pad_top,
    )


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))
