"""Command-line interface: single-image retargeting and the benchmark.

Exit codes: 0 success, 2 bad arguments, 3 input/asset error, 4 repaint
backend error, 5 report-write error. A flat key=value config file can set
any flag; explicit command-line flags win. The service URL falls back to
the RETARGETKIT_SERVICE_URL environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from .carve import seam_overlay
from .metrics import (
    DEFAULT_METHODS,
    METHODS,
    BenchConfig,
    MetricUndefined,
    parse_ratio,
    run_benchmark,
    sdr,
)
from .pipeline import retarget
from .plan import RetargetParams
from .raster import ImageFormatError, load_image, save_image, to_gray
from .repaint import BackendConfig, RepaintError
from .saliency import binarize, saliency_from_file, spectral_residual_saliency, stats

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_BACKEND = 4
EXIT_REPORT = 5

SERVICE_URL_ENV = "RETARGETKIT_SERVICE_URL"

RETARGET_DEFAULTS = {
    "input": None,
    "out": None,
    "ratio": None,
    "lambda": 0.3,
    "window": 25,
    "eta": 15,
    "saliency": None,
    "auto_saliency": False,
    "backend": "builtin",
    "service_url": None,
    "seed": 0,
    "steps": 30,
    "prompt": "",
    "repaint_region": "abrupt",
    "dilate": 0,
    "emit_mask": False,
    "emit_seams": False,
}

BENCH_DEFAULTS = {
    "corpus": None,
    "ratios": "16:9,4:3,1:1,9:16",
    "methods": ",".join(DEFAULT_METHODS),
    "report_dir": "report",
    "sdr_mode": "propagated",
    "workers": 4,
    "lambda": 0.3,
    "window": 25,
    "eta": 15,
    "auto_saliency": False,
    "center_crop": False,
    "backend": "builtin",
    "service_url": None,
    "seed": 0,
    "steps": 30,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retargetkit",
        description="Content-aware image retargeting and benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    # SUPPRESS defaults let the config merge tell "explicitly passed" from
    # "absent", so file values only fill in flags the user did not give.
    rt = sub.add_parser(
        "retarget", help="retarget one image to a target ratio",
        argument_default=argparse.SUPPRESS,
    )
    rt.add_argument("--config", help="flat key=value config file")
    rt.add_argument("--input", help="input PNG/JPEG")
    rt.add_argument("--out", help="output PNG path")
    rt.add_argument("--ratio", help="target ratio: A:B, A/B, or decimal")
    rt.add_argument("--lambda", dest="lambda_", type=float,
                    help="tolerable saliency loss ratio (default 0.3)")
    rt.add_argument("--window", type=int, help="abruptness window length (default 25)")
    rt.add_argument("--eta", type=int, help="survivor-count threshold (default 15)")
    rt.add_argument("--saliency", help="saliency PNG (single channel, image-sized)")
    rt.add_argument("--auto-saliency", action="store_true",
                    help="use the built-in spectral-residual detector")
    rt.add_argument("--backend", choices=["builtin", "remote"])
    rt.add_argument("--service-url", help="remote repaint service base URL")
    rt.add_argument("--seed", type=int)
    rt.add_argument("--steps", type=int)
    rt.add_argument("--prompt", help="text prompt for the remote backend")
    rt.add_argument("--repaint-region", choices=["abrupt", "background"])
    rt.add_argument("--dilate", type=int, help="grow the repaint region (pixels)")
    rt.add_argument("--emit-mask", action="store_true",
                    help="write carve/repaint mask debug PNGs next to the output")
    rt.add_argument("--emit-seams", action="store_true",
                    help="write a seam overlay debug PNG next to the output")

    bench = sub.add_parser(
        "bench", help="run the benchmark over a corpus",
        argument_default=argparse.SUPPRESS,
    )
    bench.add_argument("--config", help="flat key=value config file")
    bench.add_argument("--corpus", help="directory of images (+ .saliency.png files)")
    bench.add_argument("--ratios", help="comma-separated ratios (default 16:9,4:3,1:1,9:16)")
    bench.add_argument("--methods", help=f"comma-separated subset of {','.join(METHODS)}")
    bench.add_argument("--report-dir", help="where report files and outputs go")
    bench.add_argument("--sdr-mode", choices=["propagated", "detector"])
    bench.add_argument("--workers", type=int)
    bench.add_argument("--lambda", dest="lambda_", type=float)
    bench.add_argument("--window", type=int)
    bench.add_argument("--eta", type=int)
    bench.add_argument("--auto-saliency", action="store_true")
    bench.add_argument("--center-crop", action="store_true",
                       help="crop baseline ignores saliency and crops the middle")
    bench.add_argument("--backend", choices=["builtin", "remote"])
    bench.add_argument("--service-url")
    bench.add_argument("--seed", type=int)
    bench.add_argument("--steps", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = _merge_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "retarget":
        return retarget_command(cfg)
    return bench_command(cfg)


def entry() -> None:
    sys.exit(main())


def retarget_command(cfg: dict) -> int:
    for key in ("input", "out", "ratio"):
        if not cfg.get(key):
            print(f"error: --{key} is required", file=sys.stderr)
            return EXIT_USAGE
    try:
        params = RetargetParams(
            ratio=parse_ratio(cfg["ratio"]), lam=float(cfg["lambda"]),
            window=int(cfg["window"]), eta=int(cfg["eta"]),
        )
        backend = _backend_config(cfg)
        seed, steps, dilate = int(cfg["seed"]), int(cfg["steps"]), int(cfg["dilate"])
        region = cfg["repaint_region"]
        if region not in ("abrupt", "background"):
            raise ValueError(f"unknown repaint region {region!r}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        img = load_image(cfg["input"])
        sal = _load_saliency(cfg, img)
    except (FileNotFoundError, ImageFormatError, ValueError) as exc:
        print(f"error: input stage: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        result = retarget(
            img, sal, params, backend=backend,
            seed=seed, steps=steps, prompt=str(cfg["prompt"]),
            repaint_region=region, dilate=dilate,
        )
    except RepaintError as exc:
        print(f"error: repaint stage: {exc}", file=sys.stderr)
        return EXIT_BACKEND

    out_path = Path(cfg["out"])
    try:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        save_image(result.output, out_path)
        if cfg["emit_mask"]:
            _save_bits(result.carve.mask, out_path.with_suffix(".carvemask.png"))
            _save_bits(result.repaint_mask, out_path.with_suffix(".repaintmask.png"))
        if cfg["emit_seams"]:
            work = img if result.orientation == "columns" else np.swapaxes(img, 0, 1)
            overlay = seam_overlay(work, result.carve.mask)
            if result.orientation == "rows":
                overlay = np.ascontiguousarray(np.swapaxes(overlay, 0, 1))
            save_image(overlay, out_path.with_suffix(".seams.png"))
    except OSError as exc:
        print(f"error: output stage: {exc}", file=sys.stderr)
        return EXIT_INPUT

    print(json.dumps(_run_record(cfg, params, img, result)))
    return EXIT_OK


def bench_command(cfg: dict) -> int:
    if not cfg.get("corpus"):
        print("error: --corpus is required", file=sys.stderr)
        return EXIT_USAGE
    corpus = Path(cfg["corpus"])
    if not corpus.is_dir():
        print(f"error: corpus directory {corpus} does not exist", file=sys.stderr)
        return EXIT_INPUT
    try:
        ratios = [r.strip() for r in str(cfg["ratios"]).split(",") if r.strip()]
        for r in ratios:
            parse_ratio(r)
        methods = [m.strip() for m in str(cfg["methods"]).split(",") if m.strip()]
        for m in methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; choose from {','.join(METHODS)}")
        if cfg["sdr_mode"] not in ("propagated", "detector"):
            raise ValueError(f"unknown sdr mode {cfg['sdr_mode']!r}")
        bench_cfg = BenchConfig(
            lam=float(cfg["lambda"]), window=int(cfg["window"]), eta=int(cfg["eta"]),
            sdr_mode=cfg["sdr_mode"], workers=int(cfg["workers"]),
            auto_saliency=bool(cfg["auto_saliency"]), center_crop=bool(cfg["center_crop"]),
            backend=_backend_config(cfg), seed=int(cfg["seed"]), steps=int(cfg["steps"]),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        report = run_benchmark(corpus, ratios, methods, bench_cfg, cfg["report_dir"])
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_REPORT

    if report.skipped:
        print(f"skipped {len(report.skipped)} item(s):", file=sys.stderr)
        for item in report.skipped:
            print(f"  {item.image} {item.method} {item.ratio_label}: {item.error}",
                  file=sys.stderr)
    print(f"wrote {len(report.rows)} rows to {Path(cfg['report_dir']) / 'report.csv'}")
    return EXIT_OK


def _merge_config(args: argparse.Namespace) -> dict:
    defaults = RETARGET_DEFAULTS if args.command == "retarget" else BENCH_DEFAULTS
    cfg = dict(defaults)
    if getattr(args, "config", None):
        cfg.update(_read_config_file(args.config, set(defaults)))
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        cfg["lambda" if key == "lambda_" else key] = value
    return cfg


def _read_config_file(path, allowed: set) -> dict:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in allowed:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(value.strip())
    return out


def _coerce(value: str):
    lowered = value.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    return value


def _backend_config(cfg: dict) -> BackendConfig:
    kind = cfg["backend"]
    url = cfg.get("service_url") or os.environ.get(SERVICE_URL_ENV)
    return BackendConfig(kind=kind, endpoint=url if kind == "remote" else None)


def _load_saliency(cfg: dict, img: np.ndarray) -> np.ndarray:
    if cfg.get("saliency"):
        return saliency_from_file(cfg["saliency"], img.shape[1], img.shape[0])
    if cfg["auto_saliency"]:
        return spectral_residual_saliency(to_gray(img))
    raise ValueError("no saliency source: pass --saliency FILE or --auto-saliency")


def _run_record(cfg: dict, params: RetargetParams, img: np.ndarray, result) -> dict:
    plan = result.plan
    record = {
        "input": str(cfg["input"]),
        "output": str(cfg["out"]),
        "ratio": params.ratio,
        "orientation": result.orientation,
        "plan": {
            "w_t": plan.w_t, "w_f": plan.w_f, "h_f": plan.h_f,
            "pad_top": plan.pad_top, "pad_bottom": plan.pad_bottom,
        },
        "seams_removed": result.carve.seams_removed,
        "salient_seams_removed": result.carve.salient_seams_removed,
        "halted_on_budget": result.carve.halted,
        "saliency_width_in": result.saliency_width_in,
        "params": {"lambda": params.lam, "window": params.window, "eta": params.eta},
        "seed": int(cfg["seed"]),
        "steps": int(cfg["steps"]),
        "backend": cfg["backend"],
        "sdr_propagated": None,
        "sdr_detector": None,
    }
    try:
        record["sdr_propagated"] = sdr(
            result.saliency_width_in, result.propagated_width_out
        )
    except MetricUndefined:
        pass
    try:
        w_in = stats(binarize(spectral_residual_saliency(to_gray(img)))).union_width
        w_out = stats(
            binarize(spectral_residual_saliency(to_gray(result.output)))
        ).union_width
        record["sdr_detector"] = sdr(w_in, w_out)
    except (MetricUndefined, ValueError):
        pass
    return record


def _save_bits(bits: np.ndarray, path) -> None:
    im = Image.fromarray((np.asarray(bits) * 255).astype(np.uint8), mode="L")
    im.convert("1", dither=Image.NONE).save(path, format="PNG")
