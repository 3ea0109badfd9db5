"""Attribute distances: Modified Hausdorff for shape, Euclidean YUV for color."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .imaging import ColorVector, ImageAttributes, Outline, scale_outline_to_height


@dataclass(frozen=True)
class FeaturePair:
    """One comparison's (shape distance, color distance), raw or rescaled."""

    delta: float
    epsilon: float
    scaled: bool = False

    def __post_init__(self):
        for name, value in (("delta", self.delta), ("epsilon", self.epsilon)):
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative")
            if self.scaled and value > 1.0:
                raise ValueError(f"scaled {name} must lie in [0, 1]")


@dataclass(frozen=True)
class ScalerParams:
    """Observed per-feature ranges used for min-max scaling."""

    delta_min: float
    delta_max: float
    epsilon_min: float
    epsilon_max: float

    def __post_init__(self):
        if self.delta_max < self.delta_min or self.epsilon_max < self.epsilon_min:
            raise ValueError("feature range max must be >= min")


def directed_avg_distance(a: Outline, b: Outline) -> float:
    """Average over a's points of the nearest-neighbor distance into b."""
    dists = cdist(a.points, b.points)
    return float(dists.min(axis=1).mean())


def modified_hausdorff(a: Outline, b: Outline) -> float:
    """Max of the two directed average distances (Dubuisson-Jain form).

    Callers are expected to pass outlines that are already centered and
    height-normalized against each other.
    """
    return max(directed_avg_distance(a, b), directed_avg_distance(b, a))


def delta_e(c1: ColorVector, c2: ColorVector) -> float:
    """Euclidean distance between two YUV color vectors."""
    return math.hypot(c2.y - c1.y, c2.u - c1.u, c2.v - c1.v)


def normalize_outline_pair(a: Outline, b: Outline) -> tuple[Outline, Outline]:
    """Scale the shorter outline so both share the taller one's y-extent."""
    ea, eb = a.y_extent, b.y_extent
    if ea == eb:
        return a, b
    if ea < eb:
        return scale_outline_to_height(a, eb), b
    return a, scale_outline_to_height(b, ea)


def compare(
    a: ImageAttributes, b: ImageAttributes, target_height: float | None = None
) -> FeaturePair:
    """Raw feature pair for two images' attributes.

    Height normalization is pairwise by default; pass ``target_height`` to
    scale both outlines to a common dataset-wide height instead.
    """
    if target_height is None:
        oa, ob = normalize_outline_pair(a.outline, b.outline)
    else:
        oa = scale_outline_to_height(a.outline, target_height)
        ob = scale_outline_to_height(b.outline, target_height)
    return FeaturePair(
        delta=modified_hausdorff(oa, ob),
        epsilon=delta_e(a.color, b.color),
        scaled=False,
    )


def fit_scaler(pairs: Sequence[FeaturePair]) -> ScalerParams:
    """Record per-feature min and max over a batch of raw pairs."""
    if len(pairs) == 0:
        raise ValueError("cannot fit a scaler on an empty batch")
    deltas = [p.delta for p in pairs]
    epsilons = [p.epsilon for p in pairs]
    return ScalerParams(
        delta_min=min(deltas),
        delta_max=max(deltas),
        epsilon_min=min(epsilons),
        epsilon_max=max(epsilons),
    )


def _rescale(value: float, lo: float, hi: float) -> float:
    if hi == lo:
        return 0.0
    return min(max((value - lo) / (hi - lo), 0.0), 1.0)


def apply_scaler(pair: FeaturePair, scaler: ScalerParams) -> FeaturePair:
    """Min-max scale a raw pair into [0, 1], clamping out-of-range values."""
    if pair.scaled:
        raise ValueError("pair is already scaled")
    return FeaturePair(
        delta=_rescale(pair.delta, scaler.delta_min, scaler.delta_max),
        epsilon=_rescale(pair.epsilon, scaler.epsilon_min, scaler.epsilon_max),
        scaled=True,
    )


def write_feature_csv(
    rows: Sequence[tuple[FeaturePair, int]], path: str | Path
) -> None:
    """Serialize (pair, label) rows as CSV with columns delta, epsilon, label."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["delta", "epsilon", "label"])
        for pair, label in rows:
            writer.writerow([repr(pair.delta), repr(pair.epsilon), label])


def read_feature_csv(path: str | Path) -> list[tuple[FeaturePair, int]]:
    """Load (pair, label) rows written by ``write_feature_csv``."""
    out: list[tuple[FeaturePair, int]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["delta", "epsilon", "label"]:
            raise ValueError(f"unexpected feature CSV header: {header}")
        for row in reader:
            out.append((FeaturePair(float(row[0]), float(row[1])), int(row[2])))
    return out
