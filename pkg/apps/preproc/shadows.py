"""
Vessel shadow detection and shadow interval bookkeeping.
"""
import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Tuple, Union

import numpy as np
from scipy import ndimage

from apps.core.constants import (
    DEFAULT_DILATION,
    DEFAULT_INTENSITY_FACTOR,
    DEFAULT_MIN_ROBUST_WEIGHT,
    DEFAULT_ROLLING_WINDOW,
    DEFAULT_SHADOW_MARGIN,
    DEFAULT_TISSUE_HALF_HEIGHT,
)
from apps.core.exceptions import ConfigError, InsufficientData
from apps.core.image import Image, ShadowMask
from .bm import BmProfile

logger = logging.getLogger(__name__)

Interval = Tuple[int, int]


@dataclass(frozen=True)
class ShadowParams:
    """Thresholds of the column-wise shadow test."""
    min_robust_weight: float = DEFAULT_MIN_ROBUST_WEIGHT
    intensity_factor: float = DEFAULT_INTENSITY_FACTOR
    rolling_window: int = DEFAULT_ROLLING_WINDOW
    tissue_half_height: int = DEFAULT_TISSUE_HALF_HEIGHT
    dilation: int = DEFAULT_DILATION
    margin: int = DEFAULT_SHADOW_MARGIN

    def __post_init__(self):
        if self.rolling_window < 1:
            raise ConfigError(f"rolling_window must be >= 1, got {self.rolling_window}")
        if self.dilation < 0 or self.margin < 0 or self.tissue_half_height < 0:
            raise ConfigError("dilation, margin and tissue_half_height must be >= 0")


def tissue_means(img: Image, fitted: np.ndarray, half_height: int) -> np.ndarray:
    """Mean intensity of each column over rows within +/- half_height of the fitted membrane."""
    rows = np.arange(img.height, dtype=np.float64)[:, None]
    band = np.abs(rows - fitted[None, :]) <= half_height
    counts = np.maximum(band.sum(axis=0), 1)
    return (img.data * band).sum(axis=0) / counts


def runs(flags: np.ndarray) -> List[Interval]:
    """Maximal runs of True as (start, width), sorted by start."""
    padded = np.concatenate(([False], np.asarray(flags, dtype=bool), [False]))
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    return [(int(start), int(stop - start)) for start, stop in zip(edges[::2], edges[1::2])]


def detect_shadows(img: Image, profile: BmProfile, params: ShadowParams = None) -> ShadowMask:
    """
    Mark shadowed A-lines over the full image height.

    A column is a candidate when its LOESS robustness weight is below
    `min_robust_weight` or its tissue mean falls below `intensity_factor`
    times the rolling median of column means. Candidates closer than the
    dilation reach are grouped; each group spans its first to last
    candidate column and is widened by `margin` on both sides.
    """
    params = params or ShadowParams()
    if not profile.is_fitted:
        raise InsufficientData("Shadow detection needs a LOESS-fitted membrane profile")
    if profile.width != img.width:
        raise InsufficientData(f"Profile width {profile.width} does not match image width {img.width}")

    means = tissue_means(img, np.asarray(profile.fitted), params.tissue_half_height)
    reference = ndimage.median_filter(means, size=params.rolling_window, mode='nearest')
    outliers = np.asarray(profile.robust_weights) < params.min_robust_weight
    dark = means < params.intensity_factor * reference
    candidates = outliers | dark

    shadowed = np.zeros(img.width, dtype=bool)
    if candidates.any():
        grouped = candidates
        if params.dilation > 0:
            grouped = ndimage.binary_dilation(candidates, structure=np.ones(2 * params.dilation + 1, dtype=bool))
        labels, n_groups = ndimage.label(grouped)
        for group in range(1, n_groups + 1):
            members = np.flatnonzero((labels == group) & candidates)
            start = max(int(members[0]) - params.margin, 0)
            stop = min(int(members[-1]) + params.margin + 1, img.width)
            shadowed[start:stop] = True

    logger.debug(
        f"Shadow detection: {int(outliers.sum())} outlier and {int(dark.sum())} dark column(s), "
        f"{int(shadowed.sum())} column(s) masked"
    )
    return ShadowMask.from_columns(shadowed, img.height)


def shadow_intervals(mask: ShadowMask) -> List[Interval]:
    """
    Runs of shadowed columns as (start_col, width), sorted by start.

    Raises:
        NonColumnarMask: if any column mixes shadowed and reliable pixels
    """
    return runs(mask.shadowed_columns())


def write_intervals_csv(intervals: Iterable[Interval], path: Union[str, Path]) -> Path:
    """Write intervals as a `start,width` CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['start', 'width'])
        for start, width in intervals:
            writer.writerow([int(start), int(width)])
    return path


def read_intervals_csv(path: Union[str, Path]) -> List[Interval]:
    with open(path, newline='') as fh:
        return [(int(row['start']), int(row['width'])) for row in csv.DictReader(fh)]
