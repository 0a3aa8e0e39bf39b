"""
Tests for overlapping patch extraction and aggregation.
"""
import numpy as np
import pytest

from apps.core.exceptions import CoverageGap, RegionOutOfBounds
from apps.core.image import Image, PatchGrid, Rect
from apps.core.patches import (
    aggregate_patches,
    average_patches,
    extract_patches,
    patch_matrix,
    window_variance,
)


def test_extract_aggregate_identity(rng):
    img = Image(rng.random((12, 20)))
    grid = PatchGrid(patch_w=8, patch_h=8, stride_x=3, stride_y=3)
    patches = extract_patches(img, img.rect, grid)
    rebuilt = aggregate_patches(patches, img.rect, grid.for_region(img.width, img.height))
    assert np.allclose(rebuilt.data, img.data, atol=1e-12)
    assert rebuilt.bit_depth == 16


def test_aggregate_keeps_bit_depth(rng):
    img = Image(rng.random((8, 12)), bit_depth=8)
    grid = PatchGrid(patch_w=8, patch_h=8)
    patches = extract_patches(img, img.rect, grid)
    rebuilt = aggregate_patches(patches, img.rect, grid.for_region(img.width, img.height), img.bit_depth)
    assert rebuilt.bit_depth == 8
    assert np.allclose(rebuilt.data, img.data, atol=1e-12)


def test_positions_relative_to_region(rng):
    img = Image(rng.random((10, 10)))
    region = Rect(2, 1, 8, 8)
    patches = extract_patches(img, region, PatchGrid(patch_w=8, patch_h=8))
    assert len(patches) == 1
    assert patches[0].position == (0, 0)
    assert np.array_equal(patches[0].vector, img.data[1:9, 2:10].reshape(-1))


def test_region_out_of_bounds(rng):
    img = Image(rng.random((10, 10)))
    with pytest.raises(RegionOutOfBounds):
        extract_patches(img, Rect(4, 0, 8, 8), PatchGrid(patch_w=8, patch_h=8))


def test_patch_matrix_rows_follow_positions():
    block = np.arange(30, dtype=float).reshape(5, 6)
    grid = PatchGrid.cover(6, 5, patch_w=2, patch_h=2, stride_x=4, stride_y=3)
    matrix = patch_matrix(block, grid)
    for row, (x, y) in zip(matrix, grid.positions):
        assert np.array_equal(row, block[y:y + 2, x:x + 2].reshape(-1))


def test_average_is_unweighted_mean():
    vectors = np.array([np.full(4, 1.0), np.full(4, 3.0)])
    out = average_patches(vectors, [(0, 0), (1, 0)], width=3, height=2, patch_w=2, patch_h=2)
    assert out[:, 0].tolist() == [1.0, 1.0]
    assert out[:, 1].tolist() == [2.0, 2.0]
    assert out[:, 2].tolist() == [3.0, 3.0]


def test_coverage_gap():
    with pytest.raises(CoverageGap):
        average_patches(np.ones((1, 4)), [(0, 0)], width=4, height=2, patch_w=2, patch_h=2)


def test_window_variance_matches_brute_force(rng):
    data = rng.random((9, 11))
    variance = window_variance(data, patch_w=4, patch_h=3)
    assert variance.shape == (7, 8)
    for y in range(7):
        for x in range(8):
            assert variance[y, x] == pytest.approx(data[y:y + 3, x:x + 4].var(), abs=1e-12)
