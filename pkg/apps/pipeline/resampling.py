"""
Box downsampling and Catmull-Rom bicubic upsampling.
"""
from functools import lru_cache

import numpy as np

from apps.core.exceptions import ConfigError
from apps.core.image import Image, ShadowMask

CATMULL_ROM_A = -0.5


def _check_factor(factor: int) -> None:
    if factor < 1:
        raise ConfigError(f"Scale factor must be >= 1, got {factor}")


def _block_starts(length: int, factor: int) -> np.ndarray:
    return np.arange(0, length, factor)


def downsample(img: Image, factor: int) -> Image:
    """
    N x N box average; output dims are ceil(dim / N), partial edge blocks
    average the pixels they hold.
    """
    _check_factor(factor)
    if factor == 1:
        return img
    rows = _block_starts(img.height, factor)
    cols = _block_starts(img.width, factor)
    sums = np.add.reduceat(np.add.reduceat(img.data, rows, axis=0), cols, axis=1)
    row_counts = np.diff(np.append(rows, img.height))
    col_counts = np.diff(np.append(cols, img.width))
    return img.with_data(sums / np.outer(row_counts, col_counts))


def downsample_mask(mask: ShadowMask, factor: int) -> ShadowMask:
    """A low-scale pixel is shadowed if any of its source pixels is."""
    _check_factor(factor)
    if factor == 1:
        return mask
    rows = _block_starts(mask.height, factor)
    cols = _block_starts(mask.width, factor)
    shadowed = mask.shadowed.astype(np.uint8)
    blocks = np.maximum.reduceat(np.maximum.reduceat(shadowed, rows, axis=0), cols, axis=1)
    return ShadowMask(blocks == 0)


def catmull_rom(x: np.ndarray, a: float = CATMULL_ROM_A) -> np.ndarray:
    x = np.abs(x)
    near = ((a + 2) * x - (a + 3)) * x ** 2 + 1
    far = ((a * x - 5 * a) * x + 8 * a) * x - 4 * a
    return np.where(x <= 1, near, np.where(x < 2, far, 0.0))


@lru_cache(maxsize=64)
def bicubic_matrix(n_in: int, factor: int) -> np.ndarray:
    """
    (n_in * factor, n_in) interpolation matrix with edge clamping.

    Output sample x sits at source coordinate (x + 0.5) / factor - 0.5.
    """
    n_out = n_in * factor
    source = (np.arange(n_out) + 0.5) / factor - 0.5
    base = np.floor(source).astype(np.intp)
    matrix = np.zeros((n_out, n_in))
    rows = np.arange(n_out)
    for tap in range(-1, 3):
        index = base + tap
        weight = catmull_rom(source - index)
        np.add.at(matrix, (rows, np.clip(index, 0, n_in - 1)), weight)
    matrix.setflags(write=False)
    return matrix


def bicubic_upsample(data: np.ndarray, factor: int) -> np.ndarray:
    """Separable Catmull-Rom upsampling by an integer factor, clipped to [0, 1]."""
    _check_factor(factor)
    data = np.asarray(data, dtype=np.float64)
    if factor == 1:
        return data.copy()
    rows = bicubic_matrix(data.shape[0], factor)
    cols = bicubic_matrix(data.shape[1], factor)
    return np.clip(rows @ data @ cols.T, 0.0, 1.0)
