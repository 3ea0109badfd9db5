"""Raster containers, image decoding, resizing, grayscale and thresholding."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

GRAY_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True)
class Raster:
    """Decoded image grid, 8-bit samples, row-major (height, width, channels)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 3:
            raise ValueError("raster pixels must have shape (height, width, channels)")
        h, w, c = px.shape
        if h < 1 or w < 1:
            raise ValueError("raster dimensions must be at least 1x1")
        if c not in (1, 3, 4):
            raise ValueError(f"unsupported channel count: {c}")
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]


@dataclass(frozen=True)
class BinaryRaster:
    """Single-channel raster whose samples are exactly 0 or 255."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 2:
            raise ValueError("binary raster pixels must have shape (height, width)")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("binary raster dimensions must be at least 1x1")
        if not np.isin(px, (0, 255)).all():
            raise ValueError("binary raster samples must be 0 or 255")
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def load_image(path: str | Path) -> Raster:
    """Decode a PNG or JPEG file into an RGB or RGBA raster."""
    with Image.open(path) as img:
        mode = "RGBA" if "A" in img.getbands() else "RGB"
        return Raster(np.asarray(img.convert(mode), dtype=np.uint8))


def resize(img: Raster, target_width: int, target_height: int) -> Raster:
    """Resample to the target size with bilinear interpolation.

    Sample positions use the pixel-center convention; positions outside the
    source grid clamp to the border row or column.
    """
    if target_width < 1 or target_height < 1:
        raise ValueError("target dimensions must be at least 1x1")
    src = img.pixels.astype(np.float64)
    h, w = img.height, img.width

    xs = (np.arange(target_width) + 0.5) * (w / target_width) - 0.5
    ys = (np.arange(target_height) + 0.5) * (h / target_height) - 0.5
    x0 = np.floor(xs).astype(np.int64)
    y0 = np.floor(ys).astype(np.int64)
    fx = xs - x0
    fy = ys - y0
    x0c = np.clip(x0, 0, w - 1)
    x1c = np.clip(x0 + 1, 0, w - 1)
    y0c = np.clip(y0, 0, h - 1)
    y1c = np.clip(y0 + 1, 0, h - 1)

    top = src[y0c][:, x0c] * (1 - fx)[None, :, None] + src[y0c][:, x1c] * fx[None, :, None]
    bot = src[y1c][:, x0c] * (1 - fx)[None, :, None] + src[y1c][:, x1c] * fx[None, :, None]
    out = top * (1 - fy)[:, None, None] + bot * fy[:, None, None]
    return Raster(np.clip(np.rint(out), 0, 255).astype(np.uint8))


def to_grayscale(img: Raster) -> Raster:
    """Collapse RGB(A) to a single luma channel; alpha is ignored."""
    if img.channels not in (3, 4):
        raise ValueError("grayscale conversion requires an RGB or RGBA raster")
    rgb = img.pixels[:, :, :3].astype(np.float64)
    luma = rgb @ np.asarray(GRAY_WEIGHTS)
    return Raster(np.rint(luma).astype(np.uint8)[:, :, None])


def binarize(img: Raster | BinaryRaster, threshold: int) -> BinaryRaster:
    """Map samples strictly above the threshold to 255, the rest to 0."""
    if not 0 <= threshold <= 255:
        raise ValueError("threshold must be in 0..255")
    if isinstance(img, BinaryRaster):
        data = img.pixels
    else:
        if img.channels != 1:
            raise ValueError("binarize requires a single-channel raster")
        data = img.pixels[:, :, 0]
    return BinaryRaster(np.where(data > threshold, 255, 0).astype(np.uint8))
