"""One-shot object recognition from shape outlines and average color.

Images are decomposed into two attributes, an edge-outline point set and an
average YUV color vector. Pairs of images are scored with the Modified
Hausdorff Distance and the Euclidean color difference, and a logistic
verification model turns those distances into a category probability.
"""

from .classifier import (
    CategoryModel,
    Theta,
    TrainConfig,
    TrainingSet,
    TrainResult,
    VerificationModel,
    classify,
    cost,
    gradient,
    load_model,
    predict_probability,
    save_model,
    score_category,
    train,
)
from .errors import (
    DegenerateLabelsError,
    DegenerateOutlineError,
    DivergenceError,
    EmptyMaskError,
    EmptyOutlineError,
    FingerprintMismatchError,
    IngestionError,
    ModelFormatError,
    NoSampleError,
    ProtocolError,
    ShapeColorError,
)
from .harness import (
    Category,
    Dataset,
    EvaluationReport,
    LabeledPair,
    build_all_pairs,
    build_training_pairs,
    count_comparisons,
    evaluate,
    export_histogram,
    export_surface,
    extract_dataset_attributes,
    ingest_dataset,
)
from .imaging import (
    BinaryRaster,
    CannyParams,
    ColorVector,
    ImageAttributes,
    Outline,
    PreprocessConfig,
    Raster,
    average_color,
    binarize,
    canny_edges,
    center_by_median,
    extract_attributes,
    extract_outline,
    interior_mask,
    load_image,
    resize,
    rgb_to_yuv,
    scale_outline_to_height,
    to_grayscale,
)
from .similarity import (
    FeaturePair,
    ScalerParams,
    apply_scaler,
    compare,
    delta_e,
    directed_avg_distance,
    fit_scaler,
    modified_hausdorff,
    normalize_outline_pair,
)

__version__ = "0.1.0"
