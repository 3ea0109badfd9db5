"""Exception types raised by the shapecolor pipeline."""


class ShapeColorError(Exception):
    """Base class for all shapecolor-specific failures."""


class EmptyOutlineError(ShapeColorError):
    """Edge extraction produced no foreground pixels."""


class DegenerateOutlineError(ShapeColorError):
    """Outline has zero vertical extent and cannot be height-normalized."""


class EmptyMaskError(ShapeColorError):
    """Closed-contour interior is empty (open or missing contour)."""


class NoSampleError(ShapeColorError):
    """No opaque pixels available for color sampling."""


class DegenerateLabelsError(ShapeColorError):
    """Training set contains only one class."""


class DivergenceError(ShapeColorError):
    """Gradient descent cost increased repeatedly; step size too large."""


class IngestionError(ShapeColorError):
    """Dataset directory is missing, empty, or unreadable."""


class ProtocolError(ShapeColorError):
    """Dataset shape violates the evaluation protocol."""


class ModelFormatError(ShapeColorError):
    """Model file has an unsupported format version or malformed content."""


class FingerprintMismatchError(ShapeColorError):
    """Model was trained under different preprocessing settings."""
