"""Content-aware image retargeting toolkit.

Changes an image's aspect ratio by saliency-guided seam carving, detects
the abrupt regions the carving left behind, and repaints them (builtin
harmonic fill or a remote image-guided diffusion service). Ships a
benchmark harness that scores retargeting methods by the saliency discard
ratio against scale / crop / plain seam-carving baselines.
"""

from .carve import CarveResult, carve_to_width, gradient_energy, min_seam
from .pipeline import PipelineResult, retarget
from .plan import RetargetParams, RetargetPlan, choose_orientation, make_plan
from .raster import load_image, save_image, to_gray, transpose
from .saliency import (
    SaliencyStats,
    binarize,
    saliency_from_file,
    spectral_residual_saliency,
    stats,
)

__version__ = "0.1.0"

__all__ = [
    "CarveResult",
    "PipelineResult",
    "RetargetParams",
    "RetargetPlan",
    "SaliencyStats",
    "binarize",
    "carve_to_width",
    "choose_orientation",
    "gradient_energy",
    "load_image",
    "make_plan",
    "min_seam",
    "retarget",
    "saliency_from_file",
    "save_image",
    "spectral_residual_saliency",
    "stats",
    "to_gray",
    "transpose",
]
