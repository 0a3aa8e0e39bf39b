"""
Membrane flattening with integer per-column shifts.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from apps.core.exceptions import ConfigError, DimensionMismatch, InsufficientData
from apps.core.image import Image
from .bm import BmProfile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlattenRecord:
    """
    Shifts applied by `flatten`: output row r of column c holds input row
    r + shifts[c].
    """
    shifts: np.ndarray
    target_depth: int
    height: int

    @property
    def width(self) -> int:
        return len(self.shifts)

    def retained(self) -> np.ndarray:
        """Boolean map of input pixels that survive a flatten/unflatten round trip."""
        rows = np.arange(self.height)[:, None] - self.shifts[None, :]
        return (rows >= 0) & (rows < self.height)

    def valid(self) -> np.ndarray:
        """Boolean map of flattened pixels that hold input data (not out-of-frame fill)."""
        rows = np.arange(self.height)[:, None] + self.shifts[None, :]
        return (rows >= 0) & (rows < self.height)


def shift_columns(data: np.ndarray, shifts: np.ndarray, fill: float = 0.0) -> np.ndarray:
    """out[r, c] = data[r + shifts[c], c], `fill` where that row is out of frame."""
    height, width = data.shape
    source = np.arange(height)[:, None] + shifts[None, :]
    inside = (source >= 0) & (source < height)
    picked = data[np.clip(source, 0, height - 1), np.arange(width)[None, :]]
    return np.where(inside, picked, fill)


def default_target_depth(profile: BmProfile) -> int:
    return int(np.floor(np.median(profile.fitted) + 0.5))


def flatten(img: Image, profile: BmProfile, target_depth: Optional[int] = None) -> Tuple[Image, FlattenRecord]:
    """
    Move the fitted membrane of every column to `target_depth`.

    Each column is shifted by round(fitted[c]) - target_depth; rows shifted
    in from outside the frame are filled with 0.
    """
    if not profile.is_fitted:
        raise InsufficientData("Flattening needs a LOESS-fitted membrane profile")
    if profile.width != img.width:
        raise DimensionMismatch(f"Profile width {profile.width} does not match image width {img.width}")
    if target_depth is None:
        target_depth = default_target_depth(profile)
    if not 0 <= target_depth < img.height:
        raise ConfigError(f"target_depth {target_depth} outside image height {img.height}")

    shifts = np.floor(np.asarray(profile.fitted) + 0.5).astype(np.int64) - int(target_depth)
    record = FlattenRecord(shifts=shifts, target_depth=int(target_depth), height=img.height)
    logger.debug(f"Flattening to row {target_depth}: shifts in [{shifts.min()}, {shifts.max()}]")
    return img.with_data(shift_columns(img.data, shifts)), record


def replicate_edges(img: Image, record: FlattenRecord) -> Image:
    """
    Replace the out-of-frame fill of a flattened image with the nearest
    in-frame value of the same column.

    Columns shifted entirely out of frame are left as they are.
    """
    if (img.width, img.height) != (record.width, record.height):
        raise DimensionMismatch(
            f"Image {img.width}x{img.height} does not match flatten record {record.width}x{record.height}"
        )
    valid = record.valid()
    if valid.all():
        return img

    height = record.height
    first = np.clip(-record.shifts, 0, height - 1)
    last = np.clip(height - 1 - record.shifts, 0, height - 1)
    rows = np.clip(np.arange(height)[:, None], first[None, :], last[None, :])
    nearest = img.data[rows, np.arange(record.width)[None, :]]
    keep = valid | ~valid.any(axis=0)[None, :]
    logger.debug(f"Replicated {int((~keep).sum())} out-of-frame pixel(s) from column edges")
    return img.with_data(np.where(keep, img.data, nearest))


def unflatten(img: Image, record: FlattenRecord) -> Image:
    """Undo `flatten`; pixels that left the frame come back as 0."""
    if (img.width, img.height) != (record.width, record.height):
        raise DimensionMismatch(
            f"Image {img.width}x{img.height} does not match flatten record {record.width}x{record.height}"
        )
    return img.with_data(shift_columns(img.data, -record.shifts))
