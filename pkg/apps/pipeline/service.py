"""
Shadow removal service: the full flow from a raw B-scan to a shadow-free one.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from apps.core.image import Image, ShadowMask
from apps.core.interpolation import interpolate_rows
from apps.preproc.flatten import replicate_edges, unflatten
from apps.preproc.services import PreprocessParams, Preprocessor
from apps.preproc.shadows import shadow_intervals
from apps.sparse.dictionary import Dictionary
from .config import PipelineConfig
from .engine import InpaintingEngine, InpaintResult
from .upsamplers import BaseUpsampler

logger = logging.getLogger(__name__)


@dataclass
class RemovalResult:
    image: Image
    mask: ShadowMask
    intervals: List[Tuple[int, int]]
    inpaint: InpaintResult
    lost_pixels: int


class ShadowRemovalService:
    """
    Detects (or accepts) the shadow mask, flattens the B-scan about the
    membrane, inpaints, and unflattens.

    Shadowed pixels that the flatten shift pushed out of frame cannot be
    inpainted in the flattened image; they are filled by row-wise linear
    interpolation of the original instead.
    """

    def __init__(
        self,
        cfg: PipelineConfig,
        dict_full: Dictionary,
        dict_down: Optional[Dictionary] = None,
        preprocess: Optional[PreprocessParams] = None,
        upsampler: Optional[BaseUpsampler] = None,
        record: Optional[bool] = None,
    ):
        self.cfg = cfg
        self.preprocessor = Preprocessor(preprocess)
        self.engine = InpaintingEngine(cfg, dict_full, dict_down, upsampler=upsampler, record=record)

    def detect(self, img: Image) -> ShadowMask:
        return self.preprocessor.run(img).mask

    def remove_shadows(self, img: Image, mask: Optional[ShadowMask] = None, source: str = '') -> RemovalResult:
        """
        Remove vessel shadows from one B-scan.

        Args:
            img: Raw (unflattened) B-scan
            mask: Known shadow mask; detected when omitted
            source: Label stored with the run record

        Returns:
            RemovalResult with the output image and the mask used

        Raises:
            NonColumnarMask: if the mask is not column-wise constant
        """
        prep = self.preprocessor.run(img, mask)
        intervals = shadow_intervals(prep.mask)
        # Rows shifted in from outside the frame carry edge values, not the 0 fill
        result = self.engine.inpaint(replicate_edges(prep.flattened, prep.record), prep.mask, source=source)
        if not intervals:
            logger.info(f"No shadows in {source or 'image'}; returning input unchanged")
            return RemovalResult(img, prep.mask, intervals, result, 0)

        restored = unflatten(result.image, prep.record).data

        shadowed = prep.mask.shadowed
        lost = shadowed & ~prep.record.retained()
        if lost.any():
            restored = np.where(lost, interpolate_rows(img.data, prep.mask.bits), restored)

        output = np.where(prep.mask.bits, img.data, np.clip(restored, 0.0, 1.0))
        logger.info(
            f"Removed {len(intervals)} shadow(s) from {source or 'image'}; "
            f"{int(lost.sum())} out-of-frame pixel(s) interpolated"
        )
        return RemovalResult(img.with_data(output), prep.mask, intervals, result, int(lost.sum()))
