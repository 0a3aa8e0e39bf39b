"""
Preprocessing service: membrane detection, LOESS fit, shadow mask and flattening.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

from apps.core.constants import (
    DEFAULT_DARKNESS_FLOOR,
    DEFAULT_LOESS_SPAN,
    DEFAULT_MIN_RESIDUAL_SCALE,
    DEFAULT_ROBUST_ITERS,
)
from apps.core.image import Image, ShadowMask
from .bm import BmProfile, detect_bm
from .flatten import FlattenRecord, flatten, replicate_edges
from .loess import loess_fit
from .shadows import ShadowParams, detect_shadows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PreprocessParams:
    darkness_floor: float = DEFAULT_DARKNESS_FLOOR
    loess_span: float = DEFAULT_LOESS_SPAN
    robust_iters: int = DEFAULT_ROBUST_ITERS
    min_residual_scale: float = DEFAULT_MIN_RESIDUAL_SCALE
    target_depth: Optional[int] = None
    shadows: ShadowParams = field(default_factory=ShadowParams)


@dataclass(frozen=True)
class PreprocessResult:
    profile: BmProfile
    mask: ShadowMask
    flattened: Image
    record: FlattenRecord


class Preprocessor:
    """
    Runs the B-scan preprocessing chain for one image.
    """

    def __init__(self, params: Optional[PreprocessParams] = None):
        self.params = params or PreprocessParams()

    def fit_profile(self, img: Image) -> BmProfile:
        profile = detect_bm(img, darkness_floor=self.params.darkness_floor)
        return loess_fit(
            profile,
            span=self.params.loess_span,
            robust_iters=self.params.robust_iters,
            min_residual_scale=self.params.min_residual_scale,
            height=img.height,
        )

    def run(self, img: Image, mask: Optional[ShadowMask] = None) -> PreprocessResult:
        """
        Detect the membrane, build (or accept) the shadow mask and flatten.

        Args:
            img: Input B-scan
            mask: Precomputed mask; skips shadow detection when given

        Returns:
            PreprocessResult with the fitted profile, mask, flattened image and shifts
        """
        profile = self.fit_profile(img)
        if mask is None:
            mask = detect_shadows(img, profile, self.params.shadows)
        else:
            mask.check_pair(img)
        flattened, record = flatten(img, profile, self.params.target_depth)
        logger.debug(
            f"Preprocessed {img.width}x{img.height}: {mask.shadow_count // img.height} shadowed column(s), "
            f"target depth {record.target_depth}"
        )
        return PreprocessResult(profile=profile, mask=mask, flattened=flattened, record=record)

    def flatten_only(self, img: Image) -> Image:
        """Flattened image with out-of-frame rows edge-replicated, for dictionary training."""
        flattened, record = flatten(img, self.fit_profile(img), self.params.target_depth)
        return replicate_edges(flattened, record)
