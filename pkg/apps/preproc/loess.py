"""
Robust LOESS smoothing of the membrane depth curve.

Local linear regression with tricube distance weights, optionally
reweighted with bisquare robustness weights.
"""
import logging
import math
from typing import Optional, Union

import numpy as np

from apps.core.constants import (
    DEFAULT_LOESS_SPAN,
    DEFAULT_MIN_RESIDUAL_SCALE,
    DEFAULT_ROBUST_ITERS,
)
from apps.core.exceptions import ConfigError, InsufficientData
from .bm import BmProfile

logger = logging.getLogger(__name__)

MIN_VALID_COLUMNS = 3
# Determinant below which the local slope is dropped (weighted mean fit)
SINGULAR_DET = 1e-12


def tricube(u: np.ndarray) -> np.ndarray:
    u = np.clip(np.abs(u), 0.0, 1.0)
    return (1.0 - u ** 3) ** 3


def bisquare(residuals: np.ndarray, min_scale: float = DEFAULT_MIN_RESIDUAL_SCALE) -> np.ndarray:
    """Bisquare robustness weights with scale 6 * median absolute residual."""
    scale = max(float(np.median(np.abs(residuals))), min_scale)
    u = residuals / (6.0 * scale)
    return np.where(np.abs(u) < 1.0, (1.0 - u ** 2) ** 2, 0.0)


def _local_linear(xv: np.ndarray, yv: np.ndarray, x_eval: np.ndarray, k: int, robust: np.ndarray) -> np.ndarray:
    """Evaluate the local linear fit at every x_eval using the k nearest samples."""
    offsets = xv[None, :] - x_eval[:, None]
    distances = np.abs(offsets)
    kth = np.partition(distances, k - 1, axis=1)[:, k - 1]
    # Integer columns: +1 keeps the k-th neighbour at a positive weight
    bandwidth = kth + 1.0
    base = tricube(distances / bandwidth[:, None])

    weights = base * robust[None, :]
    starved = weights.sum(axis=1) < SINGULAR_DET
    if np.any(starved):
        weights[starved] = base[starved]

    s0 = weights.sum(axis=1)
    s1 = (weights * offsets).sum(axis=1)
    s2 = (weights * offsets ** 2).sum(axis=1)
    t0 = (weights * yv[None, :]).sum(axis=1)
    t1 = (weights * offsets * yv[None, :]).sum(axis=1)

    det = s0 * s2 - s1 ** 2
    mean = t0 / s0
    flat = np.abs(det) <= SINGULAR_DET * np.maximum(s0 ** 2, 1.0)
    safe_det = np.where(flat, 1.0, det)
    slope = np.where(flat, 0.0, (s0 * t1 - s1 * t0) / safe_det)
    # Offsets are centred on x_eval, so the fit there is the intercept
    return mean - slope * s1 / s0


def loess_fit(
    depths: Union[BmProfile, np.ndarray],
    span: float = DEFAULT_LOESS_SPAN,
    robust_iters: int = DEFAULT_ROBUST_ITERS,
    min_residual_scale: float = DEFAULT_MIN_RESIDUAL_SCALE,
    degenerate: Optional[np.ndarray] = None,
    height: Optional[int] = None,
) -> BmProfile:
    """
    Smooth per-column depths with robust LOESS.

    Args:
        depths: BmProfile from detect_bm, or a raw per-column depth vector
        span: Local window as a fraction of the profile width, in (0, 1]
        robust_iters: Number of bisquare reweighting passes
        min_residual_scale: Floor on the median absolute residual (pixels)
        degenerate: Columns to exclude from fitting (taken from the profile if given)
        height: Image height; when given the fit is clipped to valid rows

    Returns:
        BmProfile with `fitted` and `robust_weights` set

    Raises:
        ConfigError: span outside (0, 1] or negative iteration count
        InsufficientData: fewer than 3 usable columns
    """
    if isinstance(depths, BmProfile):
        profile = depths
    else:
        values = np.asarray(depths)
        flags = np.zeros(len(values), dtype=bool) if degenerate is None else np.asarray(degenerate, dtype=bool)
        profile = BmProfile(depths=values, degenerate=flags)

    if not 0.0 < span <= 1.0:
        raise ConfigError(f"loess_span must be in (0, 1], got {span}")
    if robust_iters < 0:
        raise ConfigError(f"robust_iters must be >= 0, got {robust_iters}")

    y = np.asarray(profile.depths, dtype=np.float64)
    x = np.arange(len(y), dtype=np.float64)
    valid = ~np.asarray(profile.degenerate, dtype=bool)
    n_valid = int(valid.sum())
    if n_valid < MIN_VALID_COLUMNS:
        raise InsufficientData(
            f"LOESS needs at least {MIN_VALID_COLUMNS} non-degenerate columns, got {n_valid}"
        )

    xv, yv = x[valid], y[valid]
    # Window size follows the full width; degenerate columns only shrink it when few remain
    k = min(n_valid, max(math.ceil(span * len(y)), MIN_VALID_COLUMNS))

    robust = np.ones(n_valid)
    fitted = _local_linear(xv, yv, x, k, robust)
    for iteration in range(robust_iters):
        robust = bisquare(yv - fitted[valid], min_residual_scale)
        fitted = _local_linear(xv, yv, x, k, robust)
        logger.debug(f"LOESS robust pass {iteration + 1}: {int((robust < 0.1).sum())} column(s) downweighted")

    if height is not None:
        fitted = np.clip(fitted, 0.0, height - 1.0)

    weights = np.zeros(len(y))
    if robust_iters > 0:
        weights[valid] = bisquare(yv - fitted[valid], min_residual_scale)
    else:
        weights[valid] = 1.0

    return profile.with_fit(fitted=fitted, robust_weights=weights)
