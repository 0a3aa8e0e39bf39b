"""
Tests for the image, mask and patch-grid data model.
"""
import numpy as np
import pytest

from apps.core.exceptions import (
    DimensionMismatch,
    InvalidImage,
    NonColumnarMask,
    RegionOutOfBounds,
    RegionTooSmall,
)
from apps.core.image import Image, PatchGrid, Rect, ShadowMask


class TestImage:
    def test_dimensions(self):
        img = Image(np.zeros((4, 6)))
        assert (img.width, img.height) == (6, 4)
        assert img.bit_depth == 16

    def test_rejects_non_2d(self):
        with pytest.raises(InvalidImage):
            Image(np.zeros(5))

    def test_rejects_nan(self):
        data = np.zeros((3, 3))
        data[1, 1] = np.nan
        with pytest.raises(InvalidImage):
            Image(data)

    def test_data_is_read_only_copy(self):
        source = np.zeros((2, 2))
        img = Image(source)
        source[0, 0] = 1.0
        assert img.data[0, 0] == 0.0
        with pytest.raises(ValueError):
            img.data[0, 0] = 1.0

    def test_with_data_keeps_bit_depth(self):
        img = Image(np.zeros((2, 2)), bit_depth=8)
        assert img.with_data(np.ones((2, 2))).bit_depth == 8

    def test_crop_and_columns(self):
        img = Image(np.arange(20, dtype=float).reshape(4, 5) / 20)
        assert np.array_equal(img.columns(1, 3).data, img.data[:, 1:3])
        assert np.array_equal(img.crop(Rect(1, 2, 2, 2)).data, img.data[2:4, 1:3])
        with pytest.raises(RegionOutOfBounds):
            img.crop(Rect(4, 0, 2, 2))


class TestShadowMask:
    def test_from_intervals(self):
        mask = ShadowMask.from_intervals([(2, 3)], width=8, height=4)
        assert mask.is_columnar()
        assert mask.shadowed_columns().tolist() == [False, False, True, True, True, False, False, False]
        assert mask.shadow_count == 12

    def test_all_reliable(self):
        mask = ShadowMask.all_reliable(5, 3)
        assert mask.shadow_count == 0
        assert not mask.shadowed_columns().any()

    def test_non_columnar(self):
        bits = np.ones((4, 4), dtype=bool)
        bits[2, 1] = False
        mask = ShadowMask(bits)
        assert not mask.is_columnar()
        with pytest.raises(NonColumnarMask):
            mask.shadowed_columns()

    def test_check_pair(self):
        mask = ShadowMask.all_reliable(5, 3)
        mask.check_pair(Image(np.zeros((3, 5))))
        with pytest.raises(DimensionMismatch):
            mask.check_pair(Image(np.zeros((3, 6))))


class TestPatchGrid:
    def test_flush_edge_positions(self):
        grid = PatchGrid.cover(20, 10, patch_w=8, patch_h=8, stride_x=5, stride_y=5)
        xs = sorted({x for x, _ in grid.positions})
        ys = sorted({y for _, y in grid.positions})
        assert xs == [0, 5, 10, 12]
        assert ys == [0, 2]
        assert len(grid) == 8

    def test_dense_grid(self):
        grid = PatchGrid.cover(10, 9, patch_w=8, patch_h=8)
        assert len(grid) == 3 * 2

    def test_region_too_small(self):
        with pytest.raises(RegionTooSmall):
            PatchGrid.cover(7, 20, patch_w=8, patch_h=8)

    def test_vectorize_row_major(self):
        grid = PatchGrid(patch_w=3, patch_h=2)
        block = np.array([[1, 2, 3], [4, 5, 6]])
        assert grid.vectorize(block).tolist() == [1, 2, 3, 4, 5, 6]
        assert grid.index_of(1, 2) == 5
        assert np.array_equal(grid.devectorize(grid.vectorize(block)), block)

    def test_vectorize_shape_check(self):
        with pytest.raises(DimensionMismatch):
            PatchGrid(patch_w=3, patch_h=2).vectorize(np.zeros((3, 3)))
