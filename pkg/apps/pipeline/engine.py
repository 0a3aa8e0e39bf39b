"""
Inpainting engine: routes strips to the narrow or multi-scale branch and
reassembles the image.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from django.conf import settings

from apps.core.exceptions import ConfigError, DimensionMismatch
from apps.core.image import Image, ShadowMask
from apps.core.models import RunStatus
from apps.core.utils import resolve_threads, timed
from apps.preproc.shadows import shadow_intervals
from apps.sparse.dictionary import Dictionary
from apps.sparse.inpaint import InpaintDiagnostics, inpaint_strip, regularize_strip
from .config import PipelineConfig
from .models import InpaintLog
from .resampling import downsample, downsample_mask
from .routing import Strip, StripKind, StripPlan, route_strips
from .upsamplers import BaseUpsampler, get_upsampler

logger = logging.getLogger(__name__)

Span = Tuple[int, int]


@dataclass
class InpaintResult:
    image: Image
    plan: StripPlan
    diagnostics: InpaintDiagnostics
    execution_time_ms: int


def expand_span(start: int, stop: int, min_width: int, lower: int, upper: int) -> Span:
    """Grow [start, stop) symmetrically to at least `min_width`, staying within [lower, upper)."""
    missing = min_width - (stop - start)
    if missing <= 0:
        return start, stop
    start = max(start - missing // 2, lower)
    stop = min(start + min_width, upper)
    start = max(stop - min_width, lower)
    return start, stop


def align_span(start: int, stop: int, factor: int, lower: int, upper: int) -> Span:
    """Grow [start, stop) so its width is a multiple of `factor` where the bounds allow."""
    remainder = (stop - start) % factor
    if remainder:
        grow = factor - remainder
        extra_right = min(grow, upper - stop)
        stop += extra_right
        start = max(start - (grow - extra_right), lower)
    return start, stop


def center_crop(data: np.ndarray, height: int, width: int) -> np.ndarray:
    top = (data.shape[0] - height) // 2
    left = (data.shape[1] - width) // 2
    return data[top:top + height, left:left + width]


class InpaintingEngine:
    """
    Inpaints a flattened image given a columnar shadow mask.

    Clean strips are copied, narrow strips are inpainted with the
    full-resolution dictionary, and wide strips go through downsample,
    low-scale inpainting, upsampling, detail correction and full-resolution
    regularization.
    Strips are processed in parallel; reliable pixels of the input are
    returned unchanged.
    """

    def __init__(
        self,
        cfg: PipelineConfig,
        dict_full: Dictionary,
        dict_down: Optional[Dictionary] = None,
        upsampler: Optional[BaseUpsampler] = None,
        record: Optional[bool] = None,
    ):
        self.settings = settings.OCT_INPAINT
        self.cfg = cfg
        self.dict_full = dict_full
        self.dict_down = dict_down
        self.record = self.settings.get('RECORD_RUNS', False) if record is None else record
        self._check_dictionaries()
        self.upsampler = upsampler or (get_upsampler(cfg) if cfg.multiscale else None)

    def _check_dictionaries(self):
        if self.dict_full.scale_tag != 1:
            raise ConfigError(f"Full-resolution dictionary has scale_tag {self.dict_full.scale_tag}, expected 1")
        if self.dict_full.atom_len != self.cfg.atom_len:
            raise DimensionMismatch(
                f"Dictionary atom length {self.dict_full.atom_len} does not match "
                f"{self.cfg.patch_w}x{self.cfg.patch_h} patches"
            )
        if self.dict_down is not None:
            if self.dict_down.scale_tag != self.cfg.downsample_factor:
                raise ConfigError(
                    f"Downsampled dictionary has scale_tag {self.dict_down.scale_tag}, "
                    f"expected {self.cfg.downsample_factor}"
                )
            if self.dict_down.atom_len != self.cfg.atom_len:
                raise DimensionMismatch(
                    f"Downsampled dictionary atom length {self.dict_down.atom_len} != {self.cfg.atom_len}"
                )

    def inpaint(self, img: Image, mask: ShadowMask, source: str = '') -> InpaintResult:
        """
        Inpaint every shadow of `img`.

        Args:
            img: Flattened image
            mask: Columnar mask, False = shadowed
            source: Label stored with the run record

        Returns:
            InpaintResult with the output image, strip plan and counters
        """
        mask.check_pair(img)
        diagnostics = InpaintDiagnostics()
        plan = None
        try:
            with timed() as watch:
                plan = route_strips(mask, self.cfg)
                if plan.of_kind(StripKind.WIDE) and self.dict_down is None:
                    raise ConfigError("Wide shadows present but no downsampled dictionary configured")
                output = self._run_plan(img, mask, plan, diagnostics)
        except Exception as e:
            self._log_run(img, mask, plan, diagnostics, 0, source, error=str(e))
            raise

        result = InpaintResult(output, plan, diagnostics, watch.elapsed_ms)
        self._log_run(img, mask, plan, diagnostics, watch.elapsed_ms, source)
        logger.info(
            f"Inpainted {img.width}x{img.height} image: {plan.shadow_counts()} shadow(s), "
            f"{diagnostics.fallback_patches} fallback patch(es), {watch.elapsed_ms}ms"
        )
        return result

    def _run_plan(self, img: Image, mask: ShadowMask, plan: StripPlan, diagnostics: InpaintDiagnostics) -> Image:
        shadow_strips = [s for s in plan if s.kind != StripKind.CLEAN]
        if not shadow_strips:
            return img

        def work(strip: Strip) -> np.ndarray:
            if strip.kind == StripKind.WIDE:
                return self._inpaint_wide(img, mask, strip, diagnostics)
            return self._inpaint_narrow(img, mask, strip, diagnostics)

        threads = min(resolve_threads(self.cfg.threads), len(shadow_strips))
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                pieces = list(executor.map(work, shadow_strips))
        else:
            pieces = [work(strip) for strip in shadow_strips]

        # Single-writer assembly in column order
        assembled = img.data.copy()
        for strip, piece in zip(shadow_strips, pieces):
            assembled[:, strip.start:strip.stop] = piece
        return img.with_data(np.where(mask.bits, img.data, np.clip(assembled, 0.0, 1.0)))

    def _inpaint_narrow(self, img, mask, strip: Strip, diagnostics) -> np.ndarray:
        start, stop = expand_span(strip.start, strip.stop, self.cfg.patch_w, 0, img.width)
        result = inpaint_strip(
            img.columns(start, stop), mask.columns(start, stop),
            self.dict_full, self.cfg.grid, self.cfg.sparsity, diagnostics,
        )
        logger.debug(f"Narrow strip [{strip.start}, {strip.stop}) inpainted")
        return result.data[:, strip.start - start:strip.stop - start]

    def _upsample_to(self, low: Image, factor: int, height: int, width: int) -> np.ndarray:
        upsampled = self.upsampler.upsample(low, factor)
        return center_crop(upsampled.data, height, width)

    def _inpaint_wide(self, img, mask, strip: Strip, diagnostics) -> np.ndarray:
        """
        Multi-scale branch for one wide strip.

        The low-scale inpainting supplies the coarse content of the shadow.
        The detail the downsample/upsample round trip removes is taken from
        a full-resolution inpainting of the same window and added back
        before regularization, so a perfect low-scale fill reproduces the
        full-resolution estimate exactly.
        """
        factor = self.cfg.downsample_factor
        reach = self.cfg.context_margin * (factor - 1)
        start = max(strip.start - reach, 0)
        stop = min(strip.stop + reach, img.width)
        start, stop = expand_span(start, stop, self.cfg.patch_w * factor, 0, img.width)
        start, stop = align_span(start, stop, factor, 0, img.width)

        window = img.columns(start, stop)
        window_mask = mask.columns(start, stop)
        low = downsample(window, factor)
        low_mask = downsample_mask(window_mask, factor)
        for low_start, low_width in shadow_intervals(low_mask):
            if low_width >= self.cfg.width_threshold:
                raise ConfigError(
                    f"Shadow at column {start + low_start * factor} is still {low_width} px wide after "
                    f"downsampling by {factor}; threshold is {self.cfg.width_threshold}"
                )

        low_inpainted = inpaint_strip(
            low, low_mask, self.dict_down, self.cfg.grid, self.cfg.sparsity, diagnostics, scale=factor,
        )
        coarse = self._upsample_to(low_inpainted, factor, window.height, window.width)

        direct = inpaint_strip(
            window, window_mask, self.dict_full, self.cfg.grid, self.cfg.sparsity, diagnostics,
        )
        detail = direct.data - self._upsample_to(downsample(direct, factor), factor, window.height, window.width)
        composite = np.where(window_mask.bits, window.data, np.clip(coarse + detail, 0.0, 1.0))

        # Regularize around the strip with the full-resolution dictionary
        reg_start, reg_stop = expand_span(strip.start, strip.stop, self.cfg.patch_w, start, stop)
        local = slice(reg_start - start, reg_stop - start)
        regularized = regularize_strip(
            window.with_data(composite[:, local]), window_mask.columns(local.start, local.stop),
            self.dict_full, self.cfg.grid, self.cfg.sparsity, diagnostics,
        )
        logger.debug(
            f"Wide strip [{strip.start}, {strip.stop}) inpainted at 1/{factor} scale "
            f"({low.width}x{low.height}), detail-corrected and regularized"
        )
        return regularized.data[:, strip.start - reg_start:strip.stop - reg_start]

    def _log_run(self, img, mask, plan, diagnostics, elapsed_ms, source, error: str = ''):
        """Log run to database."""
        if not self.record:
            return
        try:
            counts = plan.shadow_counts() if plan is not None else {}
            InpaintLog.objects.create(
                source=source,
                width=img.width,
                height=img.height,
                shadowed_columns=int(mask.shadowed.any(axis=0).sum()),
                narrow_shadows=counts.get(StripKind.NARROW.value, 0),
                wide_shadows=counts.get(StripKind.WIDE.value, 0),
                coded_patches=diagnostics.coded_patches,
                fallback_patches=diagnostics.fallback_patches,
                regularized_patches=diagnostics.regularized_patches,
                upsampler=self.upsampler.METHOD_NAME if self.upsampler else '',
                multiscale=self.cfg.multiscale,
                config=self.cfg.as_dict(),
                status=RunStatus.FAILED if error else RunStatus.SUCCESS,
                execution_time_ms=elapsed_ms,
                error_message=error,
            )
        except Exception as e:
            logger.error(f"Failed to log inpaint run: {e}")


def inpaint_image(
    img: Image,
    mask: ShadowMask,
    cfg: PipelineConfig,
    dict_full: Dictionary,
    dict_down: Optional[Dictionary] = None,
    upsampler: Optional[BaseUpsampler] = None,
) -> Image:
    """Functional entry point: inpaint a flattened image without recording the run."""
    engine = InpaintingEngine(cfg, dict_full, dict_down, upsampler=upsampler, record=False)
    return engine.inpaint(img, mask).image

