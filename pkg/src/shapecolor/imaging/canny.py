"""Canny edge detection: smoothing, gradients, suppression, hysteresis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .raster import BinaryRaster, Raster

KERNEL_SIZE = 5

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.float64)

EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass(frozen=True)
class CannyParams:
    """Smoothing width and hysteresis thresholds on the 0..255 gradient scale."""

    gaussian_sigma: float = 1.4
    low_threshold: float = 50.0
    high_threshold: float = 150.0

    def __post_init__(self):
        if not self.gaussian_sigma > 0:
            raise ValueError("gaussian_sigma must be positive")
        if self.low_threshold < 0:
            raise ValueError("low_threshold must be nonnegative")
        if self.high_threshold < self.low_threshold:
            raise ValueError("high_threshold must be >= low_threshold")


def gaussian_kernel(sigma: float, size: int = KERNEL_SIZE) -> np.ndarray:
    """Sampled 2-D Gaussian, normalized to unit sum."""
    half = size // 2
    x, y = np.mgrid[-half : half + 1, -half : half + 1]
    g = np.exp(-(x * x + y * y) / (2.0 * sigma * sigma))
    return g / g.sum()


def _suppress_non_maxima(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Keep pixels that are local maxima along the gradient direction.

    On a plateau the tie breaks toward the pixel farther along the gradient,
    so a symmetric step yields a one-pixel-wide line. Border pixels are
    always suppressed.
    """
    h, w = mag.shape
    angle = np.degrees(np.arctan2(gy, gx)) % 180.0
    padded = np.pad(mag, 1)

    def shifted(dy: int, dx: int) -> np.ndarray:
        return padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]

    # Gradient direction quantized to 4 sectors; (dy, dx) is the forward
    # neighbor offset in row/column space with y growing downward.
    sectors = [
        ((angle < 22.5) | (angle >= 157.5), (0, 1)),
        ((angle >= 22.5) & (angle < 67.5), (1, 1)),
        ((angle >= 67.5) & (angle < 112.5), (1, 0)),
        ((angle >= 112.5) & (angle < 157.5), (1, -1)),
    ]
    forward = np.zeros_like(mag)
    backward = np.zeros_like(mag)
    for mask, (dy, dx) in sectors:
        forward[mask] = shifted(dy, dx)[mask]
        backward[mask] = shifted(-dy, -dx)[mask]

    keep = (mag > forward) & (mag >= backward) & (mag > 0)
    keep[0, :] = keep[-1, :] = False
    keep[:, 0] = keep[:, -1] = False
    return np.where(keep, mag, 0.0)


def canny_edges(gray: Raster, params: CannyParams) -> BinaryRaster:
    """Extract a thin binary edge map from a single-channel raster.

    Gradient magnitude is normalized so the image maximum maps to 255 before
    the hysteresis thresholds apply; a weak pixel survives only when it is
    8-connected, possibly through other weak pixels, to a strong one.
    """
    if gray.channels != 1:
        raise ValueError("canny_edges requires a single-channel raster")
    if gray.height < KERNEL_SIZE or gray.width < KERNEL_SIZE:
        raise ValueError(f"raster must be at least {KERNEL_SIZE}x{KERNEL_SIZE}")

    data = gray.pixels[:, :, 0].astype(np.float64)
    smoothed = ndimage.convolve(data, gaussian_kernel(params.gaussian_sigma))
    gx = ndimage.convolve(smoothed, SOBEL_X)
    gy = ndimage.convolve(smoothed, SOBEL_Y)
    mag = np.hypot(gx, gy)

    peak = mag.max()
    if peak == 0:
        return BinaryRaster(np.zeros(mag.shape, dtype=np.uint8))
    mag *= 255.0 / peak

    suppressed = _suppress_non_maxima(mag, gx, gy)

    candidates = (suppressed >= params.low_threshold) & (suppressed > 0)
    strong = candidates & (suppressed >= params.high_threshold)
    labels, _ = ndimage.label(candidates, structure=EIGHT_CONNECTED)
    edge_labels = np.unique(labels[strong])
    edges = candidates & np.isin(labels, edge_labels)
    return BinaryRaster(np.where(edges, 255, 0).astype(np.uint8))
