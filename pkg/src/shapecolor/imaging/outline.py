"""Edge-outline point sets: extraction, median centering, height scaling."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DegenerateOutlineError, EmptyOutlineError
from .raster import BinaryRaster


@dataclass(frozen=True)
class Outline:
    """2-D point set of edge coordinates, columns (x, y).

    ``source_height`` is the pixel height of the bounding box at extraction
    time and is preserved through centering and scaling.
    """

    points: np.ndarray
    source_height: int

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("outline points must have shape (n, 2)")
        if pts.shape[0] == 0:
            raise ValueError("outline must contain at least one point")
        if not np.isfinite(pts).all():
            raise ValueError("outline points must be finite")
        if self.source_height < 1:
            raise ValueError("source_height must be at least 1 pixel")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def y_extent(self) -> float:
        ys = self.points[:, 1]
        return float(ys.max() - ys.min())

    @property
    def x_extent(self) -> float:
        xs = self.points[:, 0]
        return float(xs.max() - xs.min())


def extract_outline(bin_raster: BinaryRaster) -> Outline:
    """Collect the (x=column, y=row) coordinates of all 255-pixels.

    Points follow row-major scan order. Raises ``EmptyOutlineError`` when the
    raster has no foreground, since every downstream metric needs points.
    """
    rows, cols = np.nonzero(bin_raster.pixels == 255)
    if rows.size == 0:
        raise EmptyOutlineError("no 255-valued pixels to extract")
    points = np.column_stack([cols, rows]).astype(np.float64)
    source_height = int(rows.max() - rows.min() + 1)
    return Outline(points, source_height)


def center_by_median(outline: Outline) -> Outline:
    """Shift each coordinate column so its median sits at zero.

    The median of an even-count column is the mean of the two middle values,
    so centering is exact and idempotent.
    """
    medians = np.median(outline.points, axis=0)
    return Outline(outline.points - medians, outline.source_height)


def scale_outline_to_height(outline: Outline, target_height: float) -> Outline:
    """Scale both axes uniformly so the y-extent equals ``target_height``."""
    if not target_height > 0:
        raise ValueError("target_height must be positive")
    extent = outline.y_extent
    if extent == 0:
        raise DegenerateOutlineError("outline has zero vertical extent")
    factor = target_height / extent
    return Outline(outline.points * factor, outline.source_height)


def write_outline_csv(outline: Outline, path: str | Path) -> None:
    """Dump outline points as CSV, one ``x,y`` row per point."""
    lines = ["x,y"]
    lines += [f"{repr(float(x))},{repr(float(y))}" for x, y in outline.points]
    Path(path).write_text("\n".join(lines) + "\n")
