"""Image decomposition into shape and color attributes."""

from .canny import CannyParams, canny_edges, gaussian_kernel
from .color import (
    ColorVector,
    average_color,
    dilated_outline_mask,
    interior_mask,
    rgb_to_yuv,
    write_color_csv,
)
from .outline import (
    Outline,
    center_by_median,
    extract_outline,
    scale_outline_to_height,
    write_outline_csv,
)
from .pipeline import ImageAttributes, PreprocessConfig, extract_attributes
from .raster import BinaryRaster, Raster, binarize, load_image, resize, to_grayscale

__all__ = [
    "BinaryRaster",
    "CannyParams",
    "ColorVector",
    "ImageAttributes",
    "Outline",
    "PreprocessConfig",
    "Raster",
    "average_color",
    "binarize",
    "canny_edges",
    "center_by_median",
    "dilated_outline_mask",
    "extract_attributes",
    "extract_outline",
    "gaussian_kernel",
    "interior_mask",
    "load_image",
    "resize",
    "rgb_to_yuv",
    "scale_outline_to_height",
    "to_grayscale",
    "write_color_csv",
    "write_outline_csv",
]
