"""
Synthetic vessel shadows for controlled experiments.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from apps.core.constants import (
    DEFAULT_CONTEXT_MARGIN,
    DEFAULT_WIDTH_RANGE,
    SHADOW_FILL_VALUE,
    SYNTHETIC_PROTOCOL,
)
from apps.core.exceptions import ConfigError, PlacementInfeasible
from apps.core.image import Image, ShadowMask
from apps.preproc.shadows import shadow_intervals

logger = logging.getLogger(__name__)

WIDTH_UNIFORM = 'uniform'
WIDTH_NORMAL = 'normal'
WIDTH_DISTRIBUTIONS = (WIDTH_UNIFORM, WIDTH_NORMAL)

Seed = Union[int, Sequence[int]]


@dataclass(frozen=True)
class SyntheticSample:
    """One corrupted realization of a reference image."""
    reference: Image
    corrupted: Image
    mask: ShadowMask
    image_index: int
    realization: int

    @property
    def shadow_count(self) -> int:
        return len(shadow_intervals(self.mask))


def max_shadows(width: int, max_shadow_width: int, margin: int = DEFAULT_CONTEXT_MARGIN) -> int:
    """Largest count that always fits: count*hi + (count-1)*gap <= width - 2*margin."""
    gap = 2 * margin
    return max(0, (width - 2 * margin + gap) // (max_shadow_width + gap))


def draw_widths(rng: np.random.Generator, count: int, width_range: Tuple[int, int], distribution: str) -> np.ndarray:
    lo, hi = width_range
    if distribution == WIDTH_UNIFORM:
        return rng.integers(lo, hi + 1, size=count)
    if distribution == WIDTH_NORMAL:
        draws = rng.normal((lo + hi) / 2.0, max((hi - lo) / 4.0, 1e-9), size=count)
        return np.clip(np.floor(draws + 0.5), lo, hi).astype(np.int64)
    raise ConfigError(f"Width distribution must be one of {WIDTH_DISTRIBUTIONS}, got '{distribution}'")


def synth_shadows(
    img: Image,
    count: int,
    width_range: Tuple[int, int] = DEFAULT_WIDTH_RANGE,
    seed: Seed = 0,
    margin: int = DEFAULT_CONTEXT_MARGIN,
    distribution: str = WIDTH_UNIFORM,
    fill: float = SHADOW_FILL_VALUE,
) -> Tuple[Image, ShadowMask]:
    """
    Black out `count` non-overlapping full-height bands.

    Shadows are kept at least 2 * margin columns apart and margin columns
    from the image edges; start columns are drawn uniformly among all
    placements satisfying that.

    Raises:
        PlacementInfeasible: if count * hi + (count - 1) * 2 * margin > width - 2 * margin
    """
    lo, hi = int(width_range[0]), int(width_range[1])
    if lo < 1 or hi < lo:
        raise ConfigError(f"Invalid width range [{lo}, {hi}]")
    if count < 0:
        raise ConfigError(f"Shadow count must be >= 0, got {count}")
    if count == 0:
        return img, ShadowMask.all_reliable(img.width, img.height)

    gap = 2 * margin
    budget = img.width - 2 * margin
    if count * hi + (count - 1) * gap > budget:
        raise PlacementInfeasible(
            f"{count} shadow(s) up to {hi} px with {gap} px gaps do not fit in {budget} columns"
        )

    rng = np.random.default_rng(seed)
    widths = draw_widths(rng, count, (lo, hi), distribution)

    # Spread the slack uniformly over the count + 1 gaps
    slack = budget - int(widths.sum()) - (count - 1) * gap
    cuts = np.sort(rng.choice(slack + count, size=count, replace=False)) - np.arange(count)
    starts = margin + cuts + np.concatenate(([0], np.cumsum(widths[:-1] + gap)))

    shadowed = np.zeros(img.width, dtype=bool)
    for start, width in zip(starts, widths):
        shadowed[start:start + width] = True
    mask = ShadowMask.from_columns(shadowed, img.height)
    data = np.where(mask.bits, img.data, fill)
    logger.debug(f"Synthesized {count} shadow(s), widths {widths.tolist()}")
    return img.with_data(data), mask


def synth_protocol(
    images: Sequence[Image],
    shadows_per_image: int = SYNTHETIC_PROTOCOL['shadows_per_scan'],
    width_range: Tuple[int, int] = SYNTHETIC_PROTOCOL['width_range'],
    seed: int = 0,
    margin: int = DEFAULT_CONTEXT_MARGIN,
    distribution: str = WIDTH_UNIFORM,
) -> List[SyntheticSample]:
    """
    Place `shadows_per_image` shadows on every image, spread over as many
    realizations as needed to keep each one feasible.
    """
    samples = []
    for index, img in enumerate(images):
        per_realization = max_shadows(img.width, width_range[1], margin)
        if per_realization == 0:
            raise PlacementInfeasible(f"Image {index} is too narrow for a {width_range[1]} px shadow")
        realizations = math.ceil(shadows_per_image / per_realization)
        remaining = shadows_per_image
        for realization in range(realizations):
            count = min(per_realization, remaining)
            remaining -= count
            corrupted, mask = synth_shadows(
                img, count, width_range, seed=[seed, index, realization],
                margin=margin, distribution=distribution,
            )
            samples.append(SyntheticSample(img, corrupted, mask, index, realization))

    total = sum(s.shadow_count for s in samples)
    logger.info(f"Synthesized {total} shadow(s) over {len(images)} image(s) in {len(samples)} realization(s)")
    return samples
