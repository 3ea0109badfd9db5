"""Color sampling inside a closed outline and RGB to YUV conversion."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import ndimage

from ..errors import EmptyMaskError, NoSampleError
from .raster import BinaryRaster, Raster

# Luma row matches the grayscale weights; chroma rows carry the usual
# analog-video coefficients.
RGB_TO_YUV = np.array(
    [
        [0.299, 0.587, 0.114],
        [-0.14713, -0.28886, 0.436],
        [0.615, -0.51499, -0.10001],
    ],
    dtype=np.float64,
)

FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=int)


@dataclass(frozen=True)
class ColorVector:
    """Average color in YUV space; the color attribute of an image."""

    y: float
    u: float
    v: float

    def __post_init__(self):
        if not all(np.isfinite((self.y, self.u, self.v))):
            raise ValueError("color components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.y, self.u, self.v], dtype=np.float64)


def rgb_to_yuv(rgb: Sequence[float]) -> ColorVector:
    """Project an RGB triple into YUV via the coefficient matrix."""
    vec = np.asarray(rgb, dtype=np.float64)
    if vec.shape != (3,):
        raise ValueError("rgb must have exactly three components")
    if not np.isfinite(vec).all():
        raise ValueError("rgb components must be finite")
    y, u, v = RGB_TO_YUV @ vec
    return ColorVector(float(y), float(u), float(v))


def interior_mask(bin_raster: BinaryRaster) -> BinaryRaster:
    """Mark the strict interior of a closed outline.

    A pixel is interior iff it is not an outline pixel and cannot be reached
    from the raster border by a 4-connected flood through 0-pixels.
    """
    background = bin_raster.pixels == 0
    labels, _ = ndimage.label(background, structure=FOUR_CONNECTED)
    border_labels = np.unique(
        np.concatenate(
            [labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]]
        )
    )
    border_labels = border_labels[border_labels > 0]
    interior = background & ~np.isin(labels, border_labels)
    if not interior.any():
        raise EmptyMaskError("outline encloses no interior pixels")
    return BinaryRaster(np.where(interior, 255, 0).astype(np.uint8))


def dilated_outline_mask(bin_raster: BinaryRaster, radius: int = 3) -> BinaryRaster:
    """Fallback sampling region: outline pixels grown by ``radius`` pixels."""
    grown = ndimage.binary_dilation(
        bin_raster.pixels == 255, structure=np.ones((3, 3), dtype=bool), iterations=radius
    )
    return BinaryRaster(np.where(grown, 255, 0).astype(np.uint8))


def average_color(img: Raster, mask: BinaryRaster) -> ColorVector:
    """Mean RGB over masked pixels, converted to YUV.

    Fully transparent pixels (alpha 0) are excluded; any other alpha value is
    dropped without premultiplication.
    """
    if (img.height, img.width) != (mask.height, mask.width):
        raise ValueError("mask dimensions must match image dimensions")
    selected = mask.pixels == 255
    if not selected.any():
        raise NoSampleError("mask selects no pixels")
    if img.channels == 4:
        selected &= img.pixels[:, :, 3] != 0
        if not selected.any():
            raise NoSampleError("all masked pixels are fully transparent")
    elif img.channels != 3:
        raise ValueError("average_color requires an RGB or RGBA raster")
    rgb = img.pixels[selected][:, :3].astype(np.float64)
    return rgb_to_yuv(rgb.mean(axis=0))


def write_color_csv(colors: Sequence[ColorVector], path: str | Path) -> None:
    """Dump color vectors as CSV, one ``y,u,v`` row per vector."""
    lines = ["y,u,v"]
    lines += [f"{repr(c.y)},{repr(c.u)},{repr(c.v)}" for c in colors]
    Path(path).write_text("\n".join(lines) + "\n")
