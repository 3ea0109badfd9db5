import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from shapecolor.datagen import generate_dataset
from shapecolor.imaging import CannyParams, PreprocessConfig, Raster

settings.register_profile(
    "ci", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")


@pytest.fixture
def quick_config():
    """Small-canvas preprocessing config to keep pipeline tests fast."""
    return PreprocessConfig(canvas_size=64, canny=CannyParams(), binarize_threshold=127)


@pytest.fixture(scope="session")
def shape_dataset_dir(tmp_path_factory):
    """Nine-category jittered shape dataset rendered once per session."""
    root = tmp_path_factory.mktemp("shapes") / "dataset"
    generate_dataset(root, seed=7)
    return root


def solid_raster(width, height, rgb, alpha=None):
    """Uniform-color raster, RGBA when alpha is given."""
    channels = 3 if alpha is None else 4
    data = np.zeros((height, width, channels), dtype=np.uint8)
    data[:, :, 0], data[:, :, 1], data[:, :, 2] = rgb
    if alpha is not None:
        data[:, :, 3] = alpha
    return Raster(data)
