"""Experiment harness: dataset ingestion, pair generation, leave-one-out
evaluation, and CSV exports for histogram and probability-surface figures."""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .classifier import (
    CategoryModel,
    Theta,
    VerificationModel,
    classify,
    predict_probability,
)
from .errors import IngestionError, ProtocolError
from .imaging import ImageAttributes, PreprocessConfig, extract_attributes
from .similarity import FeaturePair, ScalerParams, apply_scaler, compare

logger = logging.getLogger(__name__)

VALID_GROUP_TAGS = ("distinct", "similar")

GROUPS_FILENAME = "groups.csv"


@dataclass(frozen=True)
class Category:
    """One category directory: a name and its image files."""

    name: str
    images: tuple[Path, ...]

    def __post_init__(self):
        images = tuple(Path(p) for p in self.images)
        if len(images) < 1:
            raise ValueError(f"category {self.name!r} has no images")
        object.__setattr__(self, "images", images)


@dataclass(frozen=True)
class Dataset:
    """Ingested dataset: ordered categories plus optional group tags."""

    categories: tuple[Category, ...]
    group_tags: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        names = [c.name for c in self.categories]
        if len(names) != len(set(names)):
            raise ValueError("category names must be unique")
        for name, tag in self.group_tags.items():
            if tag not in VALID_GROUP_TAGS:
                raise ValueError(f"unknown group tag {tag!r} for category {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.categories)

    def category(self, name: str) -> Category:
        for cat in self.categories:
            if cat.name == name:
                return cat
        raise ValueError(f"unknown category: {name!r}")

    def all_images(self) -> list[tuple[str, Path]]:
        """Every (category name, image path) in deterministic dataset order."""
        return [(c.name, p) for c in self.categories for p in c.images]


@dataclass(frozen=True)
class LabeledPair:
    """A compared image pair with its raw or scaled features and match label."""

    image_a: Path
    image_b: Path
    features: FeaturePair
    label: int

    def __post_init__(self):
        if self.image_a == self.image_b:
            raise ValueError("a pair must reference two different images")
        if self.label not in (0, 1):
            raise ValueError("label must be 0 or 1")


@dataclass(frozen=True)
class EvaluationReport:
    """Leave-one-out results: confusion counts and accuracy summaries."""

    categories: tuple[str, ...]
    confusion: np.ndarray
    overall_accuracy: float
    per_group_accuracy: Mapping[str, float]
    comparison_count: int


def _is_decodable(path: Path) -> bool:
    try:
        with Image.open(path) as img:
            img.verify()
        return True
    except (UnidentifiedImageError, OSError):
        return False


def ingest_dataset(root: str | Path) -> Dataset:
    """Scan ``root/<category>/<image>`` into a Dataset.

    Categories and images are ordered lexicographically. Files that do not
    decode as images are skipped with a warning. An optional
    ``root/groups.csv`` with ``category,tag`` rows attaches group tags.
    """
    root = Path(root)
    if not root.is_dir():
        raise IngestionError(f"dataset root is not a directory: {root}")
    categories = []
    for subdir in sorted(p for p in root.iterdir() if p.is_dir()):
        images = []
        for candidate in sorted(p for p in subdir.iterdir() if p.is_file()):
            if _is_decodable(candidate):
                images.append(candidate)
            else:
                logger.warning("ignoring non-image file: %s", candidate)
        if not images:
            raise IngestionError(f"category {subdir.name!r} has no readable images")
        categories.append(Category(subdir.name, tuple(images)))
    if not categories:
        raise IngestionError(f"no category directories under {root}")
    return Dataset(tuple(categories), _read_group_tags(root, [c.name for c in categories]))


def _read_group_tags(root: Path, known_names: Sequence[str]) -> dict[str, str]:
    groups_path = root / GROUPS_FILENAME
    if not groups_path.is_file():
        return {}
    tags: dict[str, str] = {}
    with open(groups_path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or (row[0] == "category" and row[1:] == ["tag"]):
                continue
            if len(row) != 2:
                raise IngestionError(f"malformed groups.csv row: {row}")
            name, tag = row[0].strip(), row[1].strip()
            if name not in known_names:
                raise IngestionError(f"groups.csv names unknown category {name!r}")
            if tag not in VALID_GROUP_TAGS:
                raise IngestionError(f"groups.csv has unknown tag {tag!r}")
            tags[name] = tag
    return tags


def _compare_attr_pair(pair: tuple[ImageAttributes, ImageAttributes]) -> FeaturePair:
    return compare(pair[0], pair[1])


def extract_dataset_attributes(
    ds: Dataset, config: PreprocessConfig, workers: int = 1
) -> dict[Path, ImageAttributes]:
    """Extract attributes for every image, optionally on a process pool.

    Results are keyed by path and identical for any worker count; each image
    is an independent task merged back in dataset order.
    """
    paths = [path for _, path in ds.all_images()]
    if workers <= 1:
        extracted = [extract_attributes(p, config) for p in paths]
    else:
        task = partial(extract_attributes, config=config)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            extracted = list(pool.map(task, paths, chunksize=_chunksize(len(paths), workers)))
    return dict(zip(paths, extracted))


def compute_pair_features(
    attr_pairs: Sequence[tuple[ImageAttributes, ImageAttributes]], workers: int = 1
) -> list[FeaturePair]:
    """Raw features for each attribute pair, in input order."""
    if workers <= 1 or len(attr_pairs) < 2:
        return [_compare_attr_pair(pair) for pair in attr_pairs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(
                _compare_attr_pair,
                attr_pairs,
                chunksize=_chunksize(len(attr_pairs), workers),
            )
        )


def _chunksize(n_items: int, workers: int) -> int:
    return max(1, n_items // (workers * 4))


def build_training_pairs(
    ds: Dataset,
    target_category: str,
    config: PreprocessConfig,
    workers: int = 1,
    attributes: Mapping[Path, ImageAttributes] | None = None,
) -> list[LabeledPair]:
    """Verification training pairs for one target category.

    Positives are all unordered pairs of distinct target images; negatives
    pair every target image with every non-target image. Features are raw.
    """
    target = ds.category(target_category)
    if len(target.images) < 2:
        raise ProtocolError(
            f"category {target_category!r} needs at least 2 images to form positive pairs"
        )
    if attributes is None:
        attributes = extract_dataset_attributes(ds, config, workers)

    path_pairs: list[tuple[Path, Path, int]] = []
    for i in range(len(target.images)):
        for j in range(i + 1, len(target.images)):
            path_pairs.append((target.images[i], target.images[j], 1))
    others = [p for name, p in ds.all_images() if name != target_category]
    for t_img in target.images:
        for other in others:
            path_pairs.append((t_img, other, 0))

    features = compute_pair_features(
        [(attributes[a], attributes[b]) for a, b, _ in path_pairs], workers
    )
    return [
        LabeledPair(a, b, feat, label)
        for (a, b, label), feat in zip(path_pairs, features)
    ]


def build_all_pairs(
    ds: Dataset,
    attributes: Mapping[Path, ImageAttributes],
    workers: int = 1,
) -> list[LabeledPair]:
    """All unordered image pairs across the dataset, labeled by category match."""
    entries = ds.all_images()
    path_pairs: list[tuple[Path, Path, int]] = []
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            (cat_a, a), (cat_b, b) = entries[i], entries[j]
            path_pairs.append((a, b, int(cat_a == cat_b)))
    features = compute_pair_features(
        [(attributes[a], attributes[b]) for a, b, _ in path_pairs], workers
    )
    return [
        LabeledPair(a, b, feat, label)
        for (a, b, label), feat in zip(path_pairs, features)
    ]


def scale_pairs(pairs: Sequence[LabeledPair], scaler: ScalerParams) -> list[LabeledPair]:
    """Replace each pair's raw features with their scaled form."""
    return [
        LabeledPair(p.image_a, p.image_b, apply_scaler(p.features, scaler), p.label)
        for p in pairs
    ]


def count_comparisons(ds: Dataset, images_per_category: int = 3) -> int:
    """Ordered within-category probe/exemplar arrangements over the dataset.

    With the standard 3 images per category this is 6 per category, so 9
    categories give 54 comparisons and 8 give 48.
    """
    for cat in ds.categories:
        if len(cat.images) != images_per_category:
            raise ProtocolError(
                f"category {cat.name!r} has {len(cat.images)} images; "
                f"protocol requires exactly {images_per_category}"
            )
    per_category = images_per_category * (images_per_category - 1)
    return per_category * len(ds.categories)


def evaluate(
    ds: Dataset,
    model: VerificationModel,
    config: PreprocessConfig,
    workers: int = 1,
    attributes: Mapping[Path, ImageAttributes] | None = None,
) -> EvaluationReport:
    """Leave-one-out evaluation over the dataset.

    Each image in turn is the probe; its category keeps the remaining images
    as exemplars while other categories keep all of theirs. The model
    fingerprint must match the supplied preprocessing settings.
    """
    if model.preprocess_fingerprint != config.fingerprint():
        raise ProtocolError(
            "preprocessing mismatch: model fingerprint differs from current settings"
        )
    for cat in ds.categories:
        if len(cat.images) < 2:
            raise ProtocolError(
                f"category {cat.name!r} needs at least 2 images for leave-one-out"
            )
    if attributes is None:
        attributes = extract_dataset_attributes(ds, config, workers)

    names = ds.names
    index = {name: i for i, name in enumerate(names)}
    confusion = np.zeros((len(names), len(names)), dtype=np.int64)

    for true_cat in ds.categories:
        for probe_path in true_cat.images:
            probe = attributes[probe_path]
            candidates = []
            for cat in ds.categories:
                exemplar_paths = [p for p in cat.images if p != probe_path]
                if not exemplar_paths:
                    continue
                candidates.append(
                    CategoryModel(
                        cat.name, tuple(attributes[p] for p in exemplar_paths)
                    )
                )
            predicted = classify(probe, candidates, model)[0][0]
            confusion[index[true_cat.name], index[predicted]] += 1

    total = int(confusion.sum())
    correct = int(np.trace(confusion))
    per_group: dict[str, float] = {}
    for tag in sorted(set(ds.group_tags.values())):
        rows = [index[n] for n in names if ds.group_tags.get(n) == tag]
        group_total = int(confusion[rows].sum())
        group_correct = int(sum(confusion[r, r] for r in rows))
        per_group[tag] = group_correct / group_total if group_total else 0.0

    comparison_count = sum(
        len(c.images) * (len(c.images) - 1) for c in ds.categories
    )
    return EvaluationReport(
        categories=names,
        confusion=confusion,
        overall_accuracy=correct / total if total else 0.0,
        per_group_accuracy=per_group,
        comparison_count=comparison_count,
    )


def export_histogram(
    pairs: Sequence[LabeledPair], w_delta: float, w_epsilon: float, bins: int
) -> list[tuple[float, float, int, int]]:
    """Bin weighted scaled-feature sums into per-label counts.

    Returns rows of (bin_low, bin_high, count_label1, count_label0) spanning
    the observed score range.
    """
    if bins < 1:
        raise ValueError("bins must be at least 1")
    if len(pairs) == 0:
        raise ValueError("cannot build a histogram from zero pairs")
    if any(not p.features.scaled for p in pairs):
        raise ValueError("histogram export requires scaled features")
    scores = np.array(
        [w_delta * p.features.delta + w_epsilon * p.features.epsilon for p in pairs]
    )
    labels = np.array([p.label for p in pairs])
    lo, hi = float(scores.min()), float(scores.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bins + 1)
    count1, _ = np.histogram(scores[labels == 1], bins=edges)
    count0, _ = np.histogram(scores[labels == 0], bins=edges)
    return [
        (float(edges[i]), float(edges[i + 1]), int(count1[i]), int(count0[i]))
        for i in range(bins)
    ]


def export_surface(
    theta: Theta, grid_resolution: int
) -> list[tuple[float, float, float]]:
    """Probability of the logistic hypothesis over a uniform grid on [0, 1]^2."""
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be at least 2")
    axis = np.linspace(0.0, 1.0, grid_resolution)
    rows = []
    for d in axis:
        for e in axis:
            prob = predict_probability(
                theta, FeaturePair(float(d), float(e), scaled=True)
            )
            rows.append((float(d), float(e), prob))
    return rows


def write_histogram_csv(
    rows: Sequence[tuple[float, float, int, int]], path: str | Path
) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["bin_low", "bin_high", "count_label1", "count_label0"])
        for lo, hi, c1, c0 in rows:
            writer.writerow([repr(lo), repr(hi), c1, c0])


def write_surface_csv(
    rows: Sequence[tuple[float, float, float]], path: str | Path
) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["delta", "epsilon", "probability"])
        for d, e, p in rows:
            writer.writerow([repr(d), repr(e), repr(p)])


def write_report_csv(report: EvaluationReport, path: str | Path) -> None:
    """Confusion matrix plus accuracy summary rows in one CSV file."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["true\\predicted", *report.categories])
        for i, name in enumerate(report.categories):
            writer.writerow([name, *(int(v) for v in report.confusion[i])])
        writer.writerow(["overall_accuracy", repr(report.overall_accuracy)])
        for tag in sorted(report.per_group_accuracy):
            writer.writerow([f"accuracy[{tag}]", repr(report.per_group_accuracy[tag])])
        writer.writerow(["protocol_comparisons", report.comparison_count])
