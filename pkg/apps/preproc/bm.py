"""
Bruch's membrane detection.
"""
import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from apps.core.constants import DEFAULT_DARKNESS_FLOOR
from apps.core.image import Image

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BmProfile:
    """
    Per-column membrane depth.

    `depths` are integer rows of the brightest pixel; `fitted` and
    `robust_weights` are filled in by the LOESS fit. `degenerate` flags
    columns that were entirely dark, whose depth was interpolated.
    """
    depths: np.ndarray
    degenerate: np.ndarray
    fitted: Optional[np.ndarray] = None
    robust_weights: Optional[np.ndarray] = None

    @property
    def width(self) -> int:
        return len(self.depths)

    @property
    def is_fitted(self) -> bool:
        return self.fitted is not None

    def with_fit(self, fitted: np.ndarray, robust_weights: np.ndarray) -> 'BmProfile':
        return replace(self, fitted=fitted, robust_weights=robust_weights)


def detect_bm(img: Image, darkness_floor: float = DEFAULT_DARKNESS_FLOOR) -> BmProfile:
    """
    Pick the brightest pixel of every A-line.

    Ties resolve to the smallest row. Columns whose maximum does not exceed
    `darkness_floor` are flagged degenerate and take a depth interpolated
    from the nearest valid columns.
    """
    data = img.data
    depths = np.argmax(data, axis=0).astype(np.int64)
    degenerate = data.max(axis=0) <= darkness_floor

    n_degenerate = int(degenerate.sum())
    if n_degenerate and n_degenerate < img.width:
        cols = np.arange(img.width)
        valid = ~degenerate
        filled = np.interp(cols[degenerate], cols[valid], depths[valid].astype(np.float64))
        depths[degenerate] = np.floor(filled + 0.5).astype(np.int64)
    if n_degenerate:
        logger.debug(f"{n_degenerate} degenerate column(s) below darkness floor {darkness_floor:.4g}")

    return BmProfile(depths=depths, degenerate=degenerate)
