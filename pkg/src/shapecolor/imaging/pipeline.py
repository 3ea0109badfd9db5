"""End-to-end attribute extraction: image file to outline plus color vector."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import EmptyMaskError
from .canny import CannyParams, canny_edges
from .color import ColorVector, average_color, dilated_outline_mask, interior_mask
from .outline import Outline, center_by_median, extract_outline
from .raster import Raster, binarize, load_image, resize, to_grayscale


@dataclass(frozen=True)
class PreprocessConfig:
    """Every knob that changes extracted attributes, hashable as a fingerprint."""

    canvas_size: int = 256
    canny: CannyParams = field(default_factory=CannyParams)
    binarize_threshold: int = 127

    def __post_init__(self):
        if self.canvas_size < 5:
            raise ValueError("canvas_size must be at least 5 pixels")
        if not 0 <= self.binarize_threshold <= 255:
            raise ValueError("binarize_threshold must be in 0..255")

    def fingerprint(self) -> str:
        """Stable hash of the preprocessing settings; stored inside models."""
        payload = {
            "canvas_size": self.canvas_size,
            "gaussian_sigma": self.canny.gaussian_sigma,
            "low_threshold": self.canny.low_threshold,
            "high_threshold": self.canny.high_threshold,
            "binarize_threshold": self.binarize_threshold,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class ImageAttributes:
    """The two attributes describing one image: shape outline and mean color."""

    outline: Outline
    color: ColorVector


def extract_attributes(
    source: str | Path | Raster, config: PreprocessConfig | None = None
) -> ImageAttributes:
    """Run the full preprocessing chain on an image file or decoded raster.

    The outline is the median-centered edge point set; the color vector is
    the mean YUV over the outline's interior. When the contour is open and
    encloses nothing, sampling falls back to a 3-pixel dilation of the
    outline itself.
    """
    config = config or PreprocessConfig()
    img = source if isinstance(source, Raster) else load_image(source)
    img = resize(img, config.canvas_size, config.canvas_size)
    gray = to_grayscale(img)
    edges = binarize(canny_edges(gray, config.canny), config.binarize_threshold)
    outline = center_by_median(extract_outline(edges))
    try:
        mask = interior_mask(edges)
    except EmptyMaskError:
        mask = dilated_outline_mask(edges)
    color = average_color(img, mask)
    return ImageAttributes(outline=outline, color=color)
