"""
Strip routing: split the image columns into clean, narrow and wide strips.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

from apps.core.image import ShadowMask
from apps.preproc.shadows import shadow_intervals
from .config import PipelineConfig

logger = logging.getLogger(__name__)

Interval = Tuple[int, int]


class StripKind(str, Enum):
    CLEAN = 'clean'
    NARROW = 'narrow'
    WIDE = 'wide'

    @property
    def rank(self) -> int:
        return {'clean': 0, 'narrow': 1, 'wide': 2}[self.value]


@dataclass(frozen=True)
class Strip:
    """Column range [start, stop) with its branch and the shadows it contains."""
    start: int
    stop: int
    kind: StripKind
    shadows: Tuple[Interval, ...] = ()

    @property
    def width(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class StripPlan:
    strips: Tuple[Strip, ...]
    width: int

    def __iter__(self):
        return iter(self.strips)

    def __len__(self) -> int:
        return len(self.strips)

    def of_kind(self, kind: StripKind) -> List[Strip]:
        return [s for s in self.strips if s.kind == kind]

    def shadow_counts(self) -> Dict[str, int]:
        counts = {kind.value: 0 for kind in StripKind if kind != StripKind.CLEAN}
        for strip in self.strips:
            if strip.kind != StripKind.CLEAN:
                counts[strip.kind.value] += len(strip.shadows)
        return counts


def classify(width: int, cfg: PipelineConfig) -> StripKind:
    """Width at or above the threshold is wide, unless multi-scale is off."""
    if cfg.multiscale and width >= cfg.width_threshold:
        return StripKind.WIDE
    return StripKind.NARROW


def route_strips(mask: ShadowMask, cfg: PipelineConfig) -> StripPlan:
    """
    Partition image columns into strips.

    Every shadow interval becomes a strip widened by `context_margin`
    columns per side (clipped to the image). Strips whose spans overlap are
    merged and take the wider class. Columns left over form clean strips.

    Raises:
        NonColumnarMask: if the mask is not column-wise constant
    """
    width = mask.width
    shadow_strips: List[Strip] = []
    for start, run in shadow_intervals(mask):
        strip = Strip(
            start=max(start - cfg.context_margin, 0),
            stop=min(start + run + cfg.context_margin, width),
            kind=classify(run, cfg),
            shadows=((start, run),),
        )
        previous = shadow_strips[-1] if shadow_strips else None
        if previous is not None and strip.start < previous.stop:
            kind = previous.kind if previous.kind.rank >= strip.kind.rank else strip.kind
            shadow_strips[-1] = Strip(
                start=previous.start,
                stop=max(previous.stop, strip.stop),
                kind=kind,
                shadows=previous.shadows + strip.shadows,
            )
        else:
            shadow_strips.append(strip)

    # Fill the gaps with clean strips
    strips: List[Strip] = []
    cursor = 0
    for strip in shadow_strips:
        if strip.start > cursor:
            strips.append(Strip(cursor, strip.start, StripKind.CLEAN))
        strips.append(strip)
        cursor = strip.stop
    if cursor < width:
        strips.append(Strip(cursor, width, StripKind.CLEAN))

    plan = StripPlan(strips=tuple(strips), width=width)
    logger.debug(f"Routed {width} columns into {len(plan)} strip(s): {plan.shadow_counts()}")
    return plan
