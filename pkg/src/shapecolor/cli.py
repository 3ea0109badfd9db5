"""Command-line driver: train a verification model, classify an image
against exemplar categories, and run the leave-one-out evaluation."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .classifier import (
    CategoryModel,
    TrainConfig,
    TrainingSet,
    VerificationModel,
    classify,
    load_model,
    save_model,
    train,
)
from .errors import ShapeColorError
from .harness import (
    build_all_pairs,
    build_training_pairs,
    evaluate,
    extract_dataset_attributes,
    export_histogram,
    export_surface,
    ingest_dataset,
    scale_pairs,
    write_histogram_csv,
    write_report_csv,
    write_surface_csv,
)
from .imaging import CannyParams, PreprocessConfig, extract_attributes
from .similarity import apply_scaler, fit_scaler, write_feature_csv

DEFAULTS = {
    "canvas": 256,
    "canny_sigma": 1.4,
    "canny_low": 50.0,
    "canny_high": 150.0,
    "threshold": 127,
    "lr": 0.1,
    "max_iters": 10_000,
    "tol": 1e-8,
    "l2": 0.0,
    "no_intercept": False,
    "hist_wdelta": 1.0,
    "hist_weps": 1.0,
    "workers": 1,
}

HISTOGRAM_BINS = 30
SURFACE_RESOLUTION = 101


@dataclass(frozen=True)
class CliConfig:
    """Effective settings after merging defaults, config file, and flags."""

    canvas: int
    canny_sigma: float
    canny_low: float
    canny_high: float
    threshold: int
    lr: float
    max_iters: int
    tol: float
    l2: float
    no_intercept: bool
    hist_wdelta: float
    hist_weps: float
    workers: int

    def preprocess(self) -> PreprocessConfig:
        return PreprocessConfig(
            canvas_size=self.canvas,
            canny=CannyParams(self.canny_sigma, self.canny_low, self.canny_high),
            binarize_threshold=self.threshold,
        )

    def training(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.lr,
            max_iterations=self.max_iters,
            convergence_tol=self.tol,
            l2_lambda=self.l2,
            use_intercept=not self.no_intercept,
        )


def _resolve_config(args: argparse.Namespace) -> CliConfig:
    """Merge defaults, optional config file, then explicit flags, and validate."""
    merged = dict(DEFAULTS)
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ShapeColorError(f"cannot read config file: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ShapeColorError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - set(DEFAULTS))
        if unknown:
            raise ShapeColorError(f"unknown config keys: {', '.join(unknown)}")
        merged.update(loaded)
    for key in DEFAULTS:
        value = getattr(args, key)
        if value is not None and value is not False:
            merged[key] = value
    cfg = CliConfig(**merged)
    if cfg.workers < 1:
        raise ShapeColorError("workers must be at least 1")
    cfg.preprocess()
    cfg.training()
    return cfg


def _echo_config(cfg: CliConfig) -> None:
    for key in sorted(DEFAULTS):
        print(f"config {key}={getattr(cfg, key)}", file=sys.stderr)


def cmd_train(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    if args.verbose:
        _echo_config(cfg)
    preprocess = cfg.preprocess()
    dataset = ingest_dataset(args.data)
    pairs = build_training_pairs(dataset, args.target, preprocess, workers=cfg.workers)
    scaler = fit_scaler([p.features for p in pairs])
    training_set = TrainingSet(
        features=tuple(apply_scaler(p.features, scaler) for p in pairs),
        labels=tuple(p.label for p in pairs),
    )
    result = train(training_set, cfg.training())
    model = VerificationModel(
        theta=result.theta,
        scaler=scaler,
        train_config=cfg.training(),
        preprocess_fingerprint=preprocess.fingerprint(),
    )
    save_model(model, args.out)
    print(f"final_cost={repr(result.final_cost)}")
    print(f"iterations={result.iterations}")
    print(f"converged={str(result.converged).lower()}")
    print(f"theta_intercept={repr(result.theta.intercept)}")
    print(f"theta_w_delta={repr(result.theta.w_delta)}")
    print(f"theta_w_epsilon={repr(result.theta.w_epsilon)}")
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    if args.verbose:
        _echo_config(cfg)
    preprocess = cfg.preprocess()
    model = load_model(args.model, expected_fingerprint=preprocess.fingerprint())
    dataset = ingest_dataset(args.exemplars)
    attributes = extract_dataset_attributes(dataset, preprocess, workers=cfg.workers)
    categories = [
        CategoryModel(cat.name, tuple(attributes[p] for p in cat.images))
        for cat in dataset.categories
    ]
    probe = extract_attributes(args.image, preprocess)
    for rank, (name, prob) in enumerate(classify(probe, categories, model), start=1):
        print(f"{rank},{name},{prob:.6f}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    if args.verbose:
        _echo_config(cfg)
    preprocess = cfg.preprocess()
    model = load_model(args.model, expected_fingerprint=preprocess.fingerprint())
    dataset = ingest_dataset(args.data)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    attributes = extract_dataset_attributes(dataset, preprocess, workers=cfg.workers)
    report = evaluate(dataset, model, preprocess, workers=cfg.workers, attributes=attributes)
    pairs = build_all_pairs(dataset, attributes, workers=cfg.workers)
    scaled = scale_pairs(pairs, model.scaler)

    write_report_csv(report, out_dir / "report.csv")
    write_feature_csv([(p.features, p.label) for p in pairs], out_dir / "pairs.csv")
    write_histogram_csv(
        export_histogram(scaled, cfg.hist_wdelta, cfg.hist_weps, HISTOGRAM_BINS),
        out_dir / "histogram.csv",
    )
    write_surface_csv(
        export_surface(model.theta, SURFACE_RESOLUTION), out_dir / "surface.csv"
    )

    print(f"overall_accuracy={repr(report.overall_accuracy)}")
    for tag in sorted(report.per_group_accuracy):
        print(f"accuracy[{tag}]={repr(report.per_group_accuracy[tag])}")
    print(f"comparisons={report.comparison_count}")
    return 0


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    d = DEFAULTS
    add = parser.add_argument
    add("--canvas", type=int, default=None, metavar="N",
        help=f"square canvas size in pixels (default: {d['canvas']})")
    add("--canny-sigma", dest="canny_sigma", type=float, default=None, metavar="F",
        help=f"Gaussian smoothing sigma (default: {d['canny_sigma']})")
    add("--canny-low", dest="canny_low", type=float, default=None, metavar="F",
        help=f"hysteresis low threshold (default: {d['canny_low']})")
    add("--canny-high", dest="canny_high", type=float, default=None, metavar="F",
        help=f"hysteresis high threshold (default: {d['canny_high']})")
    add("--threshold", type=int, default=None, metavar="N",
        help=f"binarize threshold (default: {d['threshold']})")
    add("--lr", type=float, default=None, metavar="F",
        help=f"gradient-descent learning rate (default: {d['lr']})")
    add("--max-iters", dest="max_iters", type=int, default=None, metavar="N",
        help=f"maximum training iterations (default: {d['max_iters']})")
    add("--tol", type=float, default=None, metavar="F",
        help=f"convergence tolerance on cost change (default: {d['tol']})")
    add("--l2", type=float, default=None, metavar="F",
        help=f"L2 penalty strength (default: {d['l2']})")
    add("--no-intercept", dest="no_intercept", action="store_true", default=None,
        help="train without an intercept term (default: intercept on)")
    add("--hist-wdelta", dest="hist_wdelta", type=float, default=None, metavar="F",
        help=f"histogram weight for shape distance (default: {d['hist_wdelta']})")
    add("--hist-weps", dest="hist_weps", type=float, default=None, metavar="F",
        help=f"histogram weight for color distance (default: {d['hist_weps']})")
    add("--workers", type=int, default=None, metavar="N",
        help=f"worker processes for feature extraction (default: {d['workers']})")
    add("--config", type=Path, default=None, metavar="FILE",
        help="JSON config file; flags take precedence over its values")
    add("--verbose", action="store_true", default=False,
        help="echo the effective configuration to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shapecolor",
        description="One-shot object recognition from shape outlines and average color.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit a verification model on a dataset")
    p_train.add_argument("--data", required=True, type=Path, metavar="DIR")
    p_train.add_argument("--target", required=True, metavar="NAME")
    p_train.add_argument("--out", required=True, type=Path, metavar="FILE")
    _add_shared_flags(p_train)
    p_train.set_defaults(handler=cmd_train)

    p_classify = sub.add_parser("classify", help="rank exemplar categories for an image")
    p_classify.add_argument("--model", required=True, type=Path, metavar="FILE")
    p_classify.add_argument("--exemplars", required=True, type=Path, metavar="DIR")
    p_classify.add_argument("--image", required=True, type=Path, metavar="FILE")
    _add_shared_flags(p_classify)
    p_classify.set_defaults(handler=cmd_classify)

    p_eval = sub.add_parser("evaluate", help="leave-one-out evaluation with CSV exports")
    p_eval.add_argument("--data", required=True, type=Path, metavar="DIR")
    p_eval.add_argument("--model", required=True, type=Path, metavar="FILE")
    p_eval.add_argument("--out", required=True, type=Path, metavar="DIR")
    _add_shared_flags(p_eval)
    p_eval.set_defaults(handler=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ShapeColorError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
