import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from shapecolor.errors import DegenerateOutlineError, EmptyOutlineError
from shapecolor.imaging import (
    BinaryRaster,
    Outline,
    center_by_median,
    extract_outline,
    scale_outline_to_height,
    write_outline_csv,
)

point_sets = arrays(
    np.float64,
    st.tuples(st.integers(1, 40), st.just(2)),
    elements=st.floats(-1000, 1000, allow_nan=False),
)


def binary(data):
    return BinaryRaster(np.asarray(data, dtype=np.uint8) * 255)


class TestOutlineValidation:
    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Outline(np.empty((0, 2)), 1)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            Outline(np.array([[np.nan, 0.0]]), 1)

    def test_bad_shape_rejected(self):
        with pytest.raises(ValueError):
            Outline(np.zeros((3, 3)), 1)

    def test_zero_source_height_rejected(self):
        with pytest.raises(ValueError):
            Outline(np.array([[0.0, 0.0]]), 0)


class TestExtractOutline:
    def test_single_center_pixel(self):
        data = np.zeros((3, 3), dtype=int)
        data[1, 1] = 1
        out = extract_outline(binary(data))
        np.testing.assert_array_equal(out.points, [[1.0, 1.0]])
        assert out.source_height == 1

    def test_all_zero_raises(self):
        with pytest.raises(EmptyOutlineError):
            extract_outline(binary(np.zeros((3, 3), dtype=int)))

    def test_two_pixels_and_bounding_height(self):
        data = np.zeros((4, 4), dtype=int)
        data[0, 0] = 1
        data[2, 3] = 1
        out = extract_outline(binary(data))
        np.testing.assert_array_equal(out.points, [[0.0, 0.0], [3.0, 2.0]])
        assert out.source_height == 3

    def test_row_major_scan_order(self):
        data = np.zeros((3, 3), dtype=int)
        data[0, 2] = data[1, 0] = data[1, 1] = 1
        out = extract_outline(binary(data))
        np.testing.assert_array_equal(out.points, [[2, 0], [0, 1], [1, 1]])


class TestCenterByMedian:
    def test_single_point_to_origin(self):
        out = center_by_median(Outline(np.array([[5.0, -3.0]]), 1))
        np.testing.assert_array_equal(out.points, [[0.0, 0.0]])

    def test_two_points_hand_medians(self):
        out = center_by_median(Outline(np.array([[1.0, 1.0], [3.0, 5.0]]), 5))
        np.testing.assert_allclose(out.points, [[-1.0, -2.0], [1.0, 2.0]])

    def test_symmetric_set_unchanged(self):
        pts = np.array([[-2.0, 0.0], [0.0, 0.0], [2.0, 0.0]])
        out = center_by_median(Outline(pts, 1))
        np.testing.assert_array_equal(out.points, pts)

    @given(point_sets)
    def test_medians_land_on_zero(self, pts):
        out = center_by_median(Outline(pts, 1))
        np.testing.assert_allclose(np.median(out.points, axis=0), 0.0, atol=1e-9)

    @given(point_sets)
    def test_idempotent(self, pts):
        once = center_by_median(Outline(pts, 1))
        twice = center_by_median(once)
        np.testing.assert_allclose(twice.points, once.points, atol=1e-9)

    def test_source_height_preserved(self):
        out = center_by_median(Outline(np.array([[1.0, 1.0], [3.0, 5.0]]), 17))
        assert out.source_height == 17


class TestScaleOutlineToHeight:
    def test_doubling(self):
        o = Outline(np.array([[1.0, 0.0], [4.0, 10.0]]), 11)
        out = scale_outline_to_height(o, 20.0)
        np.testing.assert_allclose(out.points, [[2.0, 0.0], [8.0, 20.0]])

    def test_identity_when_extent_matches(self):
        o = Outline(np.array([[0.0, 0.0], [3.0, 10.0]]), 11)
        out = scale_outline_to_height(o, 10.0)
        np.testing.assert_allclose(out.points, o.points)

    def test_horizontal_line_degenerate(self):
        o = Outline(np.array([[0.0, 4.0], [9.0, 4.0]]), 1)
        with pytest.raises(DegenerateOutlineError):
            scale_outline_to_height(o, 10.0)

    def test_nonpositive_target_rejected(self):
        o = Outline(np.array([[0.0, 0.0], [0.0, 1.0]]), 2)
        with pytest.raises(ValueError):
            scale_outline_to_height(o, 0.0)

    @given(point_sets, st.floats(0.1, 500))
    def test_scaling_is_uniform_and_exact(self, pts, target):
        o = Outline(pts, 1)
        if o.y_extent == 0:
            with pytest.raises(DegenerateOutlineError):
                scale_outline_to_height(o, target)
            return
        out = scale_outline_to_height(o, target)
        assert out.y_extent == pytest.approx(target, abs=1e-9 * max(1.0, target))
        if o.x_extent > 0:
            assert out.x_extent / o.x_extent == pytest.approx(
                out.y_extent / o.y_extent, rel=1e-9
            )


def test_write_outline_csv(tmp_path):
    o = Outline(np.array([[1.5, -2.0], [0.25, 3.0]]), 6)
    path = tmp_path / "outline.csv"
    write_outline_csv(o, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y"
    assert lines[1] == "1.5,-2.0"
    assert len(lines) == 3
