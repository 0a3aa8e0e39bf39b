"""
Image quality metrics: PSNR and windowed SSIM on [0, 1] data.

Both metrics can be restricted to a region given as a ShadowMask, in which
case only shadowed pixels (PSNR) or windows touching a shadowed pixel (SSIM)
count.
"""
import logging
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from apps.core.constants import SSIM_K1, SSIM_K2, SSIM_WINDOW
from apps.core.exceptions import DimensionMismatch, EmptyRegion
from apps.core.image import Image, ShadowMask

logger = logging.getLogger(__name__)

# Rows of windows evaluated at once
SSIM_BLOCK_ROWS = 64


def _check_pair(ref: Image, test: Image, region: Optional[ShadowMask]):
    if ref.data.shape != test.data.shape:
        raise DimensionMismatch(
            f"Images differ in size: {ref.width}x{ref.height} vs {test.width}x{test.height}"
        )
    if region is not None:
        region.check_pair(ref)


def psnr(ref: Image, test: Image, region: Optional[ShadowMask] = None) -> float:
    """
    Peak signal-to-noise ratio in dB for unit dynamic range.

    Args:
        ref: Reference image
        test: Image under test
        region: Restrict to shadowed pixels of this mask; whole image when None

    Returns:
        10 * log10(1 / MSE), or +inf when the images agree on the region

    Raises:
        DimensionMismatch: if sizes differ
        EmptyRegion: if the region has no pixel
    """
    _check_pair(ref, test, region)
    selected = np.ones(ref.data.shape, dtype=bool) if region is None else region.shadowed
    if not selected.any():
        raise EmptyRegion("PSNR region contains no pixel")

    diff = ref.data[selected] - test.data[selected]
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return float('inf')
    return float(10.0 * np.log10(1.0 / mse))


def _window_stats(x: np.ndarray, y: np.ndarray, window: int):
    """Per-window means, population variances and covariance (two-pass)."""
    wx = sliding_window_view(x, (window, window))
    wy = sliding_window_view(y, (window, window))
    mu_x = wx.mean(axis=(2, 3))
    mu_y = wy.mean(axis=(2, 3))
    dx = wx - mu_x[:, :, None, None]
    dy = wy - mu_y[:, :, None, None]
    var_x = (dx * dx).mean(axis=(2, 3))
    var_y = (dy * dy).mean(axis=(2, 3))
    cov = (dx * dy).mean(axis=(2, 3))
    return mu_x, mu_y, var_x, var_y, cov


def ssim_map(ref: Image, test: Image, window: int = SSIM_WINDOW) -> np.ndarray:
    """
    SSIM of every window x window patch at stride 1.

    Returns:
        Array of shape (height - window + 1, width - window + 1)
    """
    if ref.data.shape != test.data.shape:
        raise DimensionMismatch(
            f"Images differ in size: {ref.width}x{ref.height} vs {test.width}x{test.height}"
        )
    height, width = ref.data.shape
    if height < window or width < window:
        raise EmptyRegion(f"Image {width}x{height} is smaller than the {window}x{window} SSIM window")

    c1 = SSIM_K1 ** 2
    c2 = SSIM_K2 ** 2
    n_rows = height - window + 1
    out = np.empty((n_rows, width - window + 1))
    for top in range(0, n_rows, SSIM_BLOCK_ROWS):
        bottom = min(top + SSIM_BLOCK_ROWS, n_rows)
        mu_x, mu_y, var_x, var_y, cov = _window_stats(
            ref.data[top:bottom + window - 1], test.data[top:bottom + window - 1], window,
        )
        numerator = (2 * mu_x * mu_y + c1) * (2 * cov + c2)
        denominator = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
        out[top:bottom] = numerator / denominator
    return out


def ssim(ref: Image, test: Image, region: Optional[ShadowMask] = None, window: int = SSIM_WINDOW) -> float:
    """
    Mean structural similarity over 8x8 uniform windows.

    Args:
        ref: Reference image
        test: Image under test
        region: Average only windows containing a shadowed pixel of this mask
        window: Window side in pixels

    Raises:
        DimensionMismatch: if sizes differ
        EmptyRegion: if no window intersects the region
    """
    _check_pair(ref, test, region)
    scores = ssim_map(ref, test, window)
    if region is None:
        return float(scores.mean())

    touched = sliding_window_view(region.shadowed, (window, window)).any(axis=(2, 3))
    if not touched.any():
        raise EmptyRegion("No SSIM window intersects the region")
    return float(scores[touched].mean())
