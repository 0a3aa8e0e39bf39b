"""
Image, mask and patch-grid data model shared by every app.
"""
from dataclasses import dataclass, field, replace
from typing import Iterable, List, Tuple

import numpy as np

from .constants import DEFAULT_PATCH_H, DEFAULT_PATCH_W
from .exceptions import (
    DimensionMismatch,
    InvalidImage,
    NonColumnarMask,
    RegionOutOfBounds,
    RegionTooSmall,
)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in pixel coordinates (x = column, y = row)."""
    x: int
    y: int
    width: int
    height: int

    @classmethod
    def of(cls, width: int, height: int) -> 'Rect':
        return cls(0, 0, width, height)

    @property
    def right(self) -> int:
        return self.x + self.width

    @property
    def bottom(self) -> int:
        return self.y + self.height

    @property
    def slices(self) -> Tuple[slice, slice]:
        """Row and column slices for numpy indexing."""
        return slice(self.y, self.bottom), slice(self.x, self.right)

    def within(self, width: int, height: int) -> bool:
        return (
            self.x >= 0 and self.y >= 0 and self.width >= 0 and self.height >= 0
            and self.right <= width and self.bottom <= height
        )


@dataclass(frozen=True)
class Image:
    """
    Grayscale raster with values normalized to [0, 1].

    `data` is a read-only float64 array of shape (height, width), row-major.
    `bit_depth` remembers the on-disk sample depth so outputs can be written
    back at the precision they were read.
    """
    data: np.ndarray
    bit_depth: int = 16

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, copy=True)
        if data.ndim != 2 or data.size == 0:
            raise InvalidImage(f"Image data must be a non-empty 2-D array, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise InvalidImage("Image data contains non-finite values")
        object.__setattr__(self, 'data', _frozen(data))

    @classmethod
    def zeros(cls, width: int, height: int, bit_depth: int = 16) -> 'Image':
        return cls(np.zeros((height, width)), bit_depth=bit_depth)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def rect(self) -> Rect:
        return Rect.of(self.width, self.height)

    def with_data(self, data: np.ndarray) -> 'Image':
        """New image carrying this image's metadata."""
        return replace(self, data=data)

    def crop(self, region: Rect) -> 'Image':
        if not region.within(self.width, self.height):
            raise RegionOutOfBounds(f"{region} exceeds image {self.width}x{self.height}")
        return self.with_data(self.data[region.slices])

    def columns(self, start: int, stop: int) -> 'Image':
        return self.crop(Rect(start, 0, stop - start, self.height))


@dataclass(frozen=True)
class ShadowMask:
    """
    Binary per-pixel map: True (1) = reliable, False (0) = shadowed.
    """
    bits: np.ndarray

    def __post_init__(self):
        bits = np.array(self.bits, dtype=bool, copy=True)
        if bits.ndim != 2 or bits.size == 0:
            raise InvalidImage(f"Mask must be a non-empty 2-D array, got shape {bits.shape}")
        object.__setattr__(self, 'bits', _frozen(bits))

    @classmethod
    def all_reliable(cls, width: int, height: int) -> 'ShadowMask':
        return cls(np.ones((height, width), dtype=bool))

    @classmethod
    def from_columns(cls, shadowed: np.ndarray, height: int) -> 'ShadowMask':
        """Full-height mask from a per-column shadowed flag vector."""
        shadowed = np.asarray(shadowed, dtype=bool)
        return cls(np.repeat(~shadowed[np.newaxis, :], height, axis=0))

    @classmethod
    def from_intervals(cls, intervals: Iterable[Tuple[int, int]], width: int, height: int) -> 'ShadowMask':
        """Full-height mask from (start_col, width) intervals."""
        shadowed = np.zeros(width, dtype=bool)
        for start, run in intervals:
            shadowed[max(start, 0):min(start + run, width)] = True
        return cls.from_columns(shadowed, height)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def shadowed(self) -> np.ndarray:
        return ~self.bits

    @property
    def shadow_count(self) -> int:
        return int(self.bits.size - np.count_nonzero(self.bits))

    def is_columnar(self) -> bool:
        return bool(np.all(self.bits == self.bits[0:1, :]))

    def shadowed_columns(self) -> np.ndarray:
        """Per-column shadowed flags; raises NonColumnarMask if a column mixes values."""
        if not self.is_columnar():
            mixed = np.flatnonzero(np.any(self.bits != self.bits[0:1, :], axis=0))
            raise NonColumnarMask(f"Mask columns mix reliable and shadowed pixels (first column {mixed[0]})")
        return ~self.bits[0]

    def crop(self, region: Rect) -> 'ShadowMask':
        if not region.within(self.width, self.height):
            raise RegionOutOfBounds(f"{region} exceeds mask {self.width}x{self.height}")
        return ShadowMask(self.bits[region.slices])

    def columns(self, start: int, stop: int) -> 'ShadowMask':
        return self.crop(Rect(start, 0, stop - start, self.height))

    def check_pair(self, img: Image) -> None:
        if (self.width, self.height) != (img.width, img.height):
            raise DimensionMismatch(
                f"Mask {self.width}x{self.height} does not match image {img.width}x{img.height}"
            )


def _axis_positions(length: int, patch: int, stride: int) -> List[int]:
    """Regular positions along one axis with the last patch flush to the boundary."""
    positions = list(range(0, length - patch + 1, stride))
    if positions[-1] != length - patch:
        positions.append(length - patch)
    return positions


@dataclass(frozen=True)
class PatchGrid:
    """
    Overlapping a x b patch layout over a region.

    Positions are (x, y) top-left corners relative to the region. Patch
    vectors are row-major: row r, column c -> index r * patch_w + c.
    """
    patch_w: int = DEFAULT_PATCH_W
    patch_h: int = DEFAULT_PATCH_H
    stride_x: int = 1
    stride_y: int = 1
    origin: Tuple[int, int] = (0, 0)
    positions: Tuple[Tuple[int, int], ...] = field(default=(), compare=False)

    @classmethod
    def cover(
        cls,
        width: int,
        height: int,
        patch_w: int = DEFAULT_PATCH_W,
        patch_h: int = DEFAULT_PATCH_H,
        stride_x: int = 1,
        stride_y: int = 1,
        origin: Tuple[int, int] = (0, 0),
    ) -> 'PatchGrid':
        """
        Build a grid covering every pixel of a width x height region
        from `origin` onwards.

        Raises:
            RegionTooSmall: if the region cannot hold a single patch
        """
        if stride_x < 1 or stride_y < 1:
            raise ValueError("Patch strides must be >= 1")
        ox, oy = origin
        span_w, span_h = width - ox, height - oy
        if span_w < patch_w or span_h < patch_h:
            raise RegionTooSmall(
                f"Region {span_w}x{span_h} is smaller than one {patch_w}x{patch_h} patch"
            )
        xs = _axis_positions(span_w, patch_w, stride_x)
        ys = _axis_positions(span_h, patch_h, stride_y)
        positions = tuple((ox + x, oy + y) for y in ys for x in xs)
        return cls(patch_w, patch_h, stride_x, stride_y, origin, positions)

    def for_region(self, width: int, height: int) -> 'PatchGrid':
        """Same geometry and strides laid over another region."""
        return PatchGrid.cover(
            width, height, self.patch_w, self.patch_h, self.stride_x, self.stride_y, self.origin
        )

    @property
    def atom_len(self) -> int:
        return self.patch_w * self.patch_h

    def __len__(self) -> int:
        return len(self.positions)

    def index_of(self, row: int, col: int) -> int:
        return row * self.patch_w + col

    def vectorize(self, block: np.ndarray) -> np.ndarray:
        block = np.asarray(block)
        if block.shape != (self.patch_h, self.patch_w):
            raise DimensionMismatch(f"Block shape {block.shape} != ({self.patch_h}, {self.patch_w})")
        return block.reshape(-1)

    def devectorize(self, vector: np.ndarray) -> np.ndarray:
        vector = np.asarray(vector)
        if vector.shape != (self.atom_len,):
            raise DimensionMismatch(f"Vector length {vector.shape} != {self.atom_len}")
        return vector.reshape(self.patch_h, self.patch_w)
