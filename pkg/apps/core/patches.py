"""
Overlapping patch extraction and aggregation.
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .exceptions import CoverageGap, DimensionMismatch, RegionOutOfBounds, RegionTooSmall
from .image import Image, PatchGrid, Rect


@dataclass(frozen=True)
class Patch:
    """One vectorized patch and its (x, y) position relative to its region."""
    position: Tuple[int, int]
    vector: np.ndarray


def _check_region(img: Image, region: Rect, grid: PatchGrid) -> None:
    if not region.within(img.width, img.height):
        raise RegionOutOfBounds(f"{region} exceeds image {img.width}x{img.height}")
    if region.width < grid.patch_w or region.height < grid.patch_h:
        raise RegionTooSmall(
            f"Region {region.width}x{region.height} is smaller than one "
            f"{grid.patch_w}x{grid.patch_h} patch"
        )


def patch_matrix(block: np.ndarray, grid: PatchGrid) -> np.ndarray:
    """
    Gather every grid patch of a 2-D array into a (n_patches, atom_len) matrix.

    Rows follow `grid.positions`; each row is the row-major patch vector.
    """
    if not grid.positions:
        return np.empty((0, grid.atom_len), dtype=block.dtype)
    windows = np.lib.stride_tricks.sliding_window_view(block, (grid.patch_h, grid.patch_w))
    xs = np.fromiter((p[0] for p in grid.positions), dtype=np.intp, count=len(grid))
    ys = np.fromiter((p[1] for p in grid.positions), dtype=np.intp, count=len(grid))
    return windows[ys, xs].reshape(len(grid), grid.atom_len)


def accumulate_patches(
    vectors: np.ndarray,
    positions: Sequence[Tuple[int, int]],
    width: int,
    height: int,
    patch_w: int,
    patch_h: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Scatter-add patch vectors into a height x width canvas.

    Returns:
        (sums, counts) arrays; counts is the number of patches covering each pixel
    """
    sums = np.zeros((height, width))
    counts = np.zeros((height, width))
    if len(positions) == 0:
        return sums, counts

    xs = np.asarray([p[0] for p in positions], dtype=np.intp)
    ys = np.asarray([p[1] for p in positions], dtype=np.intp)
    if xs.min() < 0 or ys.min() < 0 or (xs + patch_w).max() > width or (ys + patch_h).max() > height:
        raise RegionOutOfBounds(f"Patch positions exceed the {width}x{height} target")

    # Absolute pixel coordinates of every patch element
    rr = ys[:, None] + np.repeat(np.arange(patch_h), patch_w)[None, :]
    cc = xs[:, None] + np.tile(np.arange(patch_w), patch_h)[None, :]
    np.add.at(sums, (rr, cc), np.asarray(vectors, dtype=np.float64))
    np.add.at(counts, (rr, cc), 1.0)
    return sums, counts


def average_patches(
    vectors: np.ndarray,
    positions: Sequence[Tuple[int, int]],
    width: int,
    height: int,
    patch_w: int,
    patch_h: int,
) -> np.ndarray:
    """Unweighted per-pixel mean of overlapping patches; every pixel must be covered."""
    sums, counts = accumulate_patches(vectors, positions, width, height, patch_w, patch_h)
    gaps = counts == 0
    if np.any(gaps):
        rows, cols = np.nonzero(gaps)
        raise CoverageGap(
            f"{int(gaps.sum())} pixel(s) not covered by any patch (first at row {rows[0]}, col {cols[0]})"
        )
    return sums / counts


def extract_patches(img: Image, region: Rect, grid: PatchGrid) -> List[Patch]:
    """
    Extract one vector per grid position from `region` of `img`.

    Args:
        img: Source image
        region: Rectangle within the image
        grid: Patch layout; if it holds no positions yet it is laid over the region

    Returns:
        List of Patch with positions relative to the region
    """
    _check_region(img, region, grid)
    if not grid.positions:
        grid = grid.for_region(region.width, region.height)
    matrix = patch_matrix(img.data[region.slices], grid)
    return [Patch(position, matrix[i].copy()) for i, position in enumerate(grid.positions)]


def aggregate_patches(patches: Sequence[Patch], shape: Rect, grid: PatchGrid, bit_depth: int = 16) -> Image:
    """
    Average overlapping patches back into an image of `shape`'s dimensions,
    tagged with the source image's `bit_depth`.

    Raises:
        CoverageGap: if any pixel is covered by no patch
    """
    if not patches:
        raise CoverageGap(f"No patches to aggregate over {shape.width}x{shape.height}")
    vectors = np.stack([p.vector for p in patches])
    if vectors.shape[1] != grid.atom_len:
        raise DimensionMismatch(f"Patch vectors of length {vectors.shape[1]} != {grid.atom_len}")
    data = average_patches(
        vectors, [p.position for p in patches], shape.width, shape.height, grid.patch_w, grid.patch_h
    )
    return Image(data, bit_depth=bit_depth)


def window_variance(data: np.ndarray, patch_w: int, patch_h: int) -> np.ndarray:
    """
    Population variance of every patch_h x patch_w window, indexed by top-left corner.

    Computed from integral images, shape (H - patch_h + 1, W - patch_w + 1).
    """
    data = np.asarray(data, dtype=np.float64)
    height, width = data.shape
    if height < patch_h or width < patch_w:
        raise RegionTooSmall(f"Region {width}x{height} is smaller than one {patch_w}x{patch_h} patch")

    def window_sums(values: np.ndarray) -> np.ndarray:
        integral = np.zeros((height + 1, width + 1))
        integral[1:, 1:] = values.cumsum(axis=0).cumsum(axis=1)
        return (
            integral[patch_h:, patch_w:] - integral[:-patch_h, patch_w:]
            - integral[patch_h:, :-patch_w] + integral[:-patch_h, :-patch_w]
        )

    n = patch_w * patch_h
    mean = window_sums(data) / n
    return np.maximum(window_sums(data ** 2) / n - mean ** 2, 0.0)
