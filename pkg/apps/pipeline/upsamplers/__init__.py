"""
Pluggable upsamplers for the wide-shadow branch.
"""
from typing import Union

from apps.core.exceptions import ConfigError
from apps.core.image import Image
from ..config import UPSAMPLER_BICUBIC, UPSAMPLER_EXTERNAL, PipelineConfig
from .base import BaseUpsampler
from .bicubic import BicubicUpsampler
from .external import ExternalCommandUpsampler

UPSAMPLERS = {
    UPSAMPLER_BICUBIC: BicubicUpsampler,
    UPSAMPLER_EXTERNAL: ExternalCommandUpsampler,
}


def get_upsampler(cfg: PipelineConfig) -> BaseUpsampler:
    """Instantiate the upsampler named by the configuration."""
    if cfg.upsampler == UPSAMPLER_EXTERNAL:
        return ExternalCommandUpsampler(command=cfg.upsampler_command)
    if cfg.upsampler == UPSAMPLER_BICUBIC:
        return BicubicUpsampler()
    raise ConfigError(f"Unknown upsampler '{cfg.upsampler}'")


def upsample(img: Image, factor: int, method: Union[str, BaseUpsampler] = UPSAMPLER_BICUBIC) -> Image:
    """Upsample by `factor` with a named method or an upsampler instance."""
    if isinstance(method, BaseUpsampler):
        return method.upsample(img, factor)
    if method not in UPSAMPLERS:
        raise ConfigError(f"Unknown upsampler '{method}'")
    return UPSAMPLERS[method]().upsample(img, factor)


__all__ = [
    'BaseUpsampler',
    'BicubicUpsampler',
    'ExternalCommandUpsampler',
    'get_upsampler',
    'upsample',
]
