"""Saliency-discard metric, baseline retargeting operators, benchmark runner.

The saliency discard ratio (SDR) compares the saliency union width before
and after retargeting: (width_in - width_out) / width_in, lower is better.
Two modes are supported: "detector" re-runs the built-in saliency detector
on input and output (how a human-facing evaluation would do it), and
"propagated" carries the input's binarized saliency through each method's
own geometry, which is fully deterministic and is what CI asserts on.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .carve import carve_to_width, compact_through_mask
from .pipeline import retarget
from .plan import RetargetParams
from .raster import load_image, save_image, to_gray
from .repaint import BackendConfig
from .saliency import binarize, saliency_from_file, spectral_residual_saliency, stats


class MetricUndefined(ValueError):
    """SDR is undefined when the input has no salient pixels."""


@dataclass(frozen=True)
class MethodResult:
    image: str
    method: str
    ratio: float
    ratio_label: str
    sdr: float | None
    sdr_mode: str
    runtime_s: float
    output_path: str


@dataclass(frozen=True)
class SkippedItem:
    image: str
    method: str
    ratio_label: str
    error: str


@dataclass
class BenchConfig:
    lam: float = 0.3
    window: int = 25
    eta: int = 15
    sdr_mode: str = "propagated"      # or "detector"
    workers: int = 4
    auto_saliency: bool = False
    center_crop: bool = False
    backend: BackendConfig = field(default_factory=BackendConfig)
    seed: int = 0
    steps: int = 30


@dataclass
class BenchReport:
    rows: list
    skipped: list
    ratios: list
    methods: list
    sdr_mode: str

    def mean_sdr(self) -> dict:
        """Mean SDR per (method, ratio_label); items with undefined SDR drop out."""
        sums: dict = {}
        for row in self.rows:
            if row.sdr is None:
                continue
            key = (row.method, row.ratio_label)
            total, count = sums.get(key, (0.0, 0))
            sums[key] = (total + row.sdr, count + 1)
        return {key: total / count for key, (total, count) in sums.items()}


def sdr(width_in: int, width_out: int) -> float:
    """Saliency discard ratio (width_in - width_out) / width_in.

    Negative values are legal (the salient region grew, e.g. detector
    noise); width_in = 0 raises MetricUndefined.
    """
    if width_in <= 0:
        raise MetricUndefined("saliency width of the input is zero")
    return (width_in - width_out) / width_in


def output_saliency_width(
    out_img: np.ndarray, mode: str, propagated_bits: np.ndarray | None = None
) -> int:
    """Saliency union width of a retargeted image.

    "detector" re-runs the built-in detector on the output; "propagated"
    counts the supplied carried-through binary map and needs that context.
    """
    if mode == "detector":
        return stats(binarize(spectral_residual_saliency(to_gray(out_img)))).union_width
    if mode == "propagated":
        if propagated_bits is None:
            raise ValueError("propagated mode needs the carried-through saliency bits")
        return stats(propagated_bits).union_width
    raise ValueError(f"unknown SDR mode {mode!r}")


def baseline_scale(img: np.ndarray, ratio: float) -> np.ndarray:
    """Nearest-neighbor resample of the width to round(H * ratio)."""
    out, _ = _scale_with_bits(img, None, ratio)
    return out


def baseline_crop(
    img: np.ndarray, ratio: float, sal: np.ndarray, center: bool = False
) -> np.ndarray:
    """Crop a (round(H * ratio) x H) window around the saliency centroid.

    The window is clamped to the image; ``center=True`` ignores saliency
    and crops the middle instead.
    """
    out, _ = _crop_with_bits(img, binarize(sal), ratio, center)
    return out


def baseline_seam_carving(img: np.ndarray, ratio: float) -> np.ndarray:
    """Plain seam carving to round(H * ratio): zero saliency, no budget."""
    out, _ = _seam_with_bits(img, None, ratio)
    return out


def run_benchmark(
    corpus: Path | str,
    ratios: list,
    methods: list,
    cfg: BenchConfig,
    report_dir: Path | str,
) -> BenchReport:
    """Score every corpus image under every ratio and method.

    Images are ``*.png`` / ``*.jpg`` files; a sibling ``<stem>.saliency.png``
    provides the saliency map unless ``cfg.auto_saliency`` enables the
    built-in detector. Per-item failures are recorded as skips and never
    abort the batch. Writes report.csv, report.md, report.png, and the
    retargeted images under ``report_dir``.
    """
    corpus = Path(corpus)
    report_dir = Path(report_dir)
    out_dir = report_dir / "outputs"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in methods:
        if name not in METHODS:
            raise ValueError(f"unknown method {name!r}; choose from {sorted(METHODS)}")

    images = sorted(
        p for p in corpus.iterdir()
        if p.suffix.lower() in (".png", ".jpg", ".jpeg")
        and not p.name.endswith(".saliency.png")
    )
    rows: list = []
    skipped: list = []

    def run_one(path: Path):
        got_rows, got_skips = [], []
        try:
            img = load_image(path)
            sal = _load_saliency(path, img, cfg)
        except Exception as exc:
            return [], [SkippedItem(path.name, "*", "*", str(exc))]
        for label in ratios:
            ratio = parse_ratio(label)
            for name in methods:
                try:
                    got_rows.append(
                        _score(path, img, sal, name, ratio, str(label), cfg, out_dir)
                    )
                except Exception as exc:
                    got_skips.append(SkippedItem(path.name, name, str(label), str(exc)))
        return got_rows, got_skips

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run_one, images))
    else:
        results = [run_one(p) for p in images]
    for got_rows, got_skips in results:
        rows.extend(got_rows)
        skipped.extend(got_skips)

    rows.sort(key=lambda r: (r.image, r.method, r.ratio_label))
    report = BenchReport(
        rows=rows, skipped=skipped, ratios=[str(r) for r in ratios],
        methods=list(methods), sdr_mode=cfg.sdr_mode,
    )
    from .report import write_report_files

    write_report_files(report, report_dir)
    return report


def parse_ratio(text) -> float:
    """Parse "A:B", "A/B", or a decimal into a positive width/height ratio."""
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        text = str(text).strip()
        for sep in (":", "/"):
            if sep in text:
                left, _, right = text.partition(sep)
                try:
                    a, b = float(left), float(right)
                except ValueError as exc:
                    raise ValueError(f"cannot parse ratio {text!r}") from exc
                if a <= 0 or b <= 0:
                    raise ValueError(f"ratio components must be positive: {text!r}")
                return a / b
        try:
            value = float(text)
        except ValueError as exc:
            raise ValueError(f"cannot parse ratio {text!r}") from exc
    if value <= 0 or not math.isfinite(value):
        raise ValueError(f"ratio must be positive and finite: {text!r}")
    return value


# --- method implementations -------------------------------------------------
# Each returns (output image, propagated binary saliency of the output).

def _scale_with_bits(img, bits, ratio):
    h, w = img.shape[:2]
    w_t = max(1, int(math.floor(h * ratio + 0.5)))
    idx = np.arange(w_t) * w // w_t
    out = img[:, idx]
    return out, None if bits is None else bits[:, idx]


def _crop_with_bits(img, bits, ratio, center):
    h, w = img.shape[:2]
    w_t = min(w, max(1, int(math.floor(h * ratio + 0.5))))
    if center:
        left = (w - w_t) // 2
    else:
        cx = stats(bits).centroid_x
        left = int(np.clip(round(cx - w_t / 2), 0, w - w_t))
    out = img[:, left : left + w_t]
    return out, None if bits is None else bits[:, left : left + w_t]


def _seam_with_bits(img, bits, ratio):
    h, w = img.shape[:2]
    w_t = min(w, max(1, int(math.floor(h * ratio + 0.5))))
    result = carve_to_width(img, np.zeros((h, w)), w_t, 0.0)
    carried = None if bits is None else compact_through_mask(bits, result.mask)
    return result.image, carried


def _run_method(name, img, sal, ratio, cfg):
    bits = binarize(sal)
    if name == "scale":
        return _scale_with_bits(img, bits, ratio)
    if name == "crop":
        return _crop_with_bits(img, bits, ratio, cfg.center_crop)
    if name == "seam-carving":
        return _seam_with_bits(img, bits, ratio)
    params = RetargetParams(ratio=ratio, lam=cfg.lam, window=cfg.window, eta=cfg.eta)
    region = "background" if name == "br" else "abrupt"
    result = retarget(
        img, sal, params, backend=cfg.backend,
        seed=cfg.seed, steps=cfg.steps, repaint_region=region,
    )
    return result.output, result.propagated_bits


METHODS = ("scale", "crop", "seam-carving", "ours", "br")
DEFAULT_METHODS = ("scale", "crop", "seam-carving", "ours")


def _score(path, img, sal, name, ratio, label, cfg, out_dir):
    start = time.perf_counter()
    out, carried = _run_method(name, img, sal, ratio, cfg)
    elapsed = time.perf_counter() - start

    out_path = out_dir / f"{path.stem}__{name}__{label.replace(':', 'x').replace('/', 'x')}.png"
    save_image(out, out_path)

    value = None
    try:
        if cfg.sdr_mode == "propagated":
            width_in = stats(binarize(sal)).union_width
            width_out = output_saliency_width(out, "propagated", carried)
        else:
            width_in = stats(binarize(spectral_residual_saliency(to_gray(img)))).union_width
            width_out = output_saliency_width(out, "detector")
        value = sdr(width_in, width_out)
    except (MetricUndefined, ValueError):
        value = None
    return MethodResult(
        image=path.name, method=name, ratio=ratio, ratio_label=label,
        sdr=value, sdr_mode=cfg.sdr_mode, runtime_s=elapsed,
        output_path=str(out_path),
    )


def _load_saliency(path: Path, img: np.ndarray, cfg: BenchConfig) -> np.ndarray:
    sal_path = path.parent / f"{path.stem}.saliency.png"
    if sal_path.exists():
        return saliency_from_file(sal_path, img.shape[1], img.shape[0])
    if cfg.auto_saliency:
        return spectral_residual_saliency(to_gray(img))
    raise FileNotFoundError(
        f"{sal_path} missing and the built-in detector is disabled"
    )
