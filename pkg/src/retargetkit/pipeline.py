"""End-to-end retargeting pipeline.

saliency -> orientation/plan -> budgeted content-aware carving -> repaint
region planning -> canvas placement -> repaint. The height-shrinking case
runs transposed so carving always removes vertical seams; results are
transposed back before returning. The pipeline also propagates the input's
binarized saliency through the carve, which gives the deterministic
(mask-propagated) saliency width used by the metrics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import regions
from .carve import CarveResult, carve_to_width, compact_through_mask
from .plan import RetargetParams, RetargetPlan, adjust_plan_for_width, choose_orientation, make_plan
from .raster import transpose
from .repaint import BackendConfig, RepaintRequest, repaint
from .saliency import binarize, stats


@dataclass
class PipelineResult:
    output: np.ndarray          # final image, original orientation
    plan: RetargetPlan          # geometry in the carving frame
    carve: CarveResult          # carving-frame carve record
    repaint_mask: np.ndarray    # final-canvas mask, original orientation
    propagated_bits: np.ndarray # input saliency propagated to the output
    saliency_width_in: int      # union width of the input's binarized saliency
    orientation: str

    @property
    def propagated_width_out(self) -> int:
        return stats(self.propagated_bits).union_width


def retarget(
    img: np.ndarray,
    sal: np.ndarray,
    params: RetargetParams,
    backend: BackendConfig | None = None,
    seed: int = 0,
    steps: int = 30,
    prompt: str = "",
    repaint_region: str = "abrupt",
    dilate: int = 0,
) -> PipelineResult:
    """Retarget ``img`` to ``params.ratio`` and repaint abrupt regions.

    ``repaint_region`` selects the region planner: "abrupt" (survivor
    density below eta) or "background" (regenerate everything non-salient;
    ablation baseline). ``dilate`` optionally grows the repaint region.
    """
    if backend is None:
        backend = BackendConfig()
    if repaint_region not in ("abrupt", "background"):
        raise ValueError(f"unknown repaint region {repaint_region!r}")
    img = np.asarray(img)
    sal = np.asarray(sal, dtype=np.float64)
    if sal.shape != img.shape[:2]:
        raise ValueError(f"saliency {sal.shape} does not match image {img.shape[:2]}")

    h0, w0 = img.shape[:2]
    bits_in = binarize(sal)
    width_in = stats(bits_in).union_width

    orientation = choose_orientation(w0, h0, params.ratio)
    if orientation == "rows":
        work_img, work_sal, work_bits = transpose(img), transpose(sal), transpose(bits_in)
        ratio_eff = 1.0 / params.ratio
    else:
        work_img, work_sal, work_bits = img, sal, bits_in
        ratio_eff = params.ratio
    work_params = RetargetParams(
        ratio=ratio_eff, lam=params.lam, window=params.window, eta=params.eta
    )
    wh, ww = work_img.shape[:2]

    plan = make_plan(ww, wh, stats(work_bits).union_width, work_params, orientation)
    carve = carve_to_width(work_img, work_sal, plan.w_f, work_params.lam)
    plan = adjust_plan_for_width(plan, carve.image.shape[1], wh)

    if repaint_region == "abrupt":
        counts = regions.abruptness(carve.mask, work_params.window)
        field = regions.repaint_field_from_carve(carve.mask, counts, work_params.eta)
    else:
        field = regions.background_field(binarize(carve.saliency_out), carve.mask)
    field = regions.dilate_repaint(field, dilate)
    mask = regions.merge_outpaint(field, plan)
    canvas = regions.place_on_canvas(carve.image, plan)

    out = repaint(
        RepaintRequest(
            canvas=canvas, mask=mask, guidance=work_img,
            seed=seed, steps=steps, prompt=prompt,
        ),
        backend,
    )

    carried = regions.merge_outpaint(
        compact_through_mask(work_bits, carve.mask), plan
    )
    # padding rows of the merged map are zero, which is correct here too:
    # padding adds no salient pixels.
    if orientation == "rows":
        out, mask, carried = transpose(out), transpose(mask), transpose(carried)

    return PipelineResult(
        output=out,
        plan=plan,
        carve=carve,
        repaint_mask=mask,
        propagated_bits=carried,
        saliency_width_in=width_in,
        orientation=orientation,
    )
