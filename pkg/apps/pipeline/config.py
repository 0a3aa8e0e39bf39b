"""
Pipeline configuration.
"""
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

from apps.core.constants import (
    DEFAULT_CONTEXT_MARGIN,
    DEFAULT_DOWNSAMPLE_FACTOR,
    DEFAULT_MAX_EXPECTED_WIDTH,
    DEFAULT_N_ATOMS,
    DEFAULT_PATCH_H,
    DEFAULT_PATCH_W,
    DEFAULT_SPARSITY,
    DEFAULT_WIDTH_THRESHOLD,
)
from apps.core.exceptions import ConfigError
from apps.core.image import PatchGrid

UPSAMPLER_BICUBIC = 'bicubic'
UPSAMPLER_EXTERNAL = 'external'
UPSAMPLER_CHOICES = (UPSAMPLER_BICUBIC, UPSAMPLER_EXTERNAL)


@dataclass(frozen=True)
class PipelineConfig:
    """
    Geometry, coding and routing parameters of the inpainting pipeline.

    Validated on construction: a shadow of `max_expected_width` must come
    out narrower than `width_threshold` after downsampling by
    `downsample_factor`, i.e. ceil(max_expected_width / N) + 2 <= threshold.
    """
    patch_w: int = DEFAULT_PATCH_W
    patch_h: int = DEFAULT_PATCH_H
    sparsity: int = DEFAULT_SPARSITY
    n_atoms: int = DEFAULT_N_ATOMS
    downsample_factor: int = DEFAULT_DOWNSAMPLE_FACTOR
    width_threshold: int = DEFAULT_WIDTH_THRESHOLD
    stride_x: int = 1
    stride_y: int = 1
    context_margin: int = DEFAULT_CONTEXT_MARGIN
    max_expected_width: int = DEFAULT_MAX_EXPECTED_WIDTH
    upsampler: str = UPSAMPLER_BICUBIC
    upsampler_command: str = ''
    dict_full: Optional[str] = None
    dict_down: Optional[str] = None
    multiscale: bool = True
    threads: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        positive = {
            'patch_w': self.patch_w,
            'patch_h': self.patch_h,
            'sparsity': self.sparsity,
            'n_atoms': self.n_atoms,
            'downsample_factor': self.downsample_factor,
            'width_threshold': self.width_threshold,
            'stride_x': self.stride_x,
            'stride_y': self.stride_y,
            'max_expected_width': self.max_expected_width,
        }
        for key, value in positive.items():
            if value < 1:
                raise ConfigError(f"{key} must be >= 1, got {value}")
        if self.context_margin < 0:
            raise ConfigError(f"context_margin must be >= 0, got {self.context_margin}")
        if self.upsampler not in UPSAMPLER_CHOICES:
            raise ConfigError(f"upsampler must be one of {UPSAMPLER_CHOICES}, got '{self.upsampler}'")

        low_scale_width = math.ceil(self.max_expected_width / self.downsample_factor) + 2
        if self.multiscale and low_scale_width > self.width_threshold:
            raise ConfigError(
                f"max_expected_width {self.max_expected_width} at downsample factor "
                f"{self.downsample_factor} needs ceil(w/N) + 2 = {low_scale_width} <= "
                f"width_threshold {self.width_threshold}"
            )

    @property
    def atom_len(self) -> int:
        return self.patch_w * self.patch_h

    @property
    def grid(self) -> PatchGrid:
        """Patch geometry template; positions are laid per strip."""
        return PatchGrid(self.patch_w, self.patch_h, self.stride_x, self.stride_y)

    def evolve(self, **changes) -> 'PipelineConfig':
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)
