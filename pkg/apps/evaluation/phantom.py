"""
Seeded layered B-scan phantoms.

A phantom has a dark vitreous, a stack of retinal layers with undulating
boundaries, a bright curved Bruch's membrane and a fading choroid, with
multiplicative speckle and light blur.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import ndimage

from apps.core.image import Image
from apps.core.io import save_image
from apps.core.utils import make_rng

logger = logging.getLogger(__name__)

BM_INTENSITY = 0.92
BM_THICKNESS = 3
VITREOUS_INTENSITY = 0.03
LAYER_INTENSITY_RANGE = (0.25, 0.55)
CHOROID_INTENSITY = 0.4
SPECKLE_SHAPE = 40.0
MAX_BACKGROUND = 0.97


@dataclass(frozen=True)
class Phantom:
    image: Image
    bm_depths: np.ndarray


def _undulation(rng: np.random.Generator, width: int, amplitude: float) -> np.ndarray:
    cols = np.arange(width)
    wave = np.zeros(width)
    for _ in range(3):
        period = rng.uniform(width / 3.0, width * 1.5)
        wave += rng.uniform(0.3, 1.0) * np.sin(2 * np.pi * cols / period + rng.uniform(0, 2 * np.pi))
    return amplitude * wave / 3.0


def generate_phantom(
    width: int,
    height: int,
    seed: int = 0,
    curvature: Optional[float] = None,
    speckle: bool = True,
    blur: float = 0.7,
) -> Phantom:
    """
    Build one phantom.

    Args:
        width, height: Image size in pixels
        seed: Random seed
        curvature: Quadratic membrane curvature (px per px^2); random when omitted
        speckle: Apply multiplicative gamma speckle
        blur: Gaussian blur sigma in pixels (0 disables)

    Returns:
        Phantom with the image and the true membrane row per column
    """
    rng = make_rng(seed)
    cols = np.arange(width, dtype=np.float64)
    rows = np.arange(height, dtype=np.float64)[:, None]

    if curvature is None:
        curvature = rng.uniform(-1.0, 1.0) * 0.15 * height / max(width, 1) ** 2
    centre = rng.uniform(0.55, 0.7) * height
    tilt = rng.uniform(-0.03, 0.03) * height / max(width, 1)
    bm = centre + curvature * (cols - width / 2.0) ** 2 + tilt * (cols - width / 2.0)
    bm = np.clip(np.floor(bm + 0.5), BM_THICKNESS + height * 0.3, height - BM_THICKNESS - 2)

    data = np.full((height, width), VITREOUS_INTENSITY)

    # Retinal layers stacked above the membrane
    n_layers = int(rng.integers(4, 7))
    retina_thickness = rng.uniform(0.2, 0.28) * height
    fractions = np.sort(rng.uniform(0.0, 1.0, size=n_layers - 1))
    top = bm[None, :] - retina_thickness
    boundaries = [top]
    for fraction in fractions:
        boundaries.append(bm[None, :] - retina_thickness * (1.0 - fraction) + _undulation(rng, width, 2.0)[None, :])
    boundaries.append(bm[None, :])
    for layer in range(n_layers):
        inside = (rows >= boundaries[layer]) & (rows < boundaries[layer + 1])
        data = np.where(inside, rng.uniform(*LAYER_INTENSITY_RANGE), data)

    # Choroid fading with depth below the membrane
    below = rows >= bm[None, :] + BM_THICKNESS
    fade = np.exp(-(rows - bm[None, :] - BM_THICKNESS) / (0.12 * height))
    data = np.where(below, CHOROID_INTENSITY * fade + VITREOUS_INTENSITY, data)

    # Bright membrane band
    band = (rows >= bm[None, :]) & (rows < bm[None, :] + BM_THICKNESS)
    data = np.where(band, BM_INTENSITY, data)

    if speckle:
        data = data * rng.gamma(SPECKLE_SHAPE, 1.0 / SPECKLE_SHAPE, size=data.shape)
    if blur > 0:
        data = ndimage.gaussian_filter(data, sigma=blur, mode='nearest')

    # The membrane centre row stays the strict maximum of each A-line
    data = np.clip(data, 0.0, MAX_BACKGROUND)
    depths = bm.astype(np.int64) + BM_THICKNESS // 2
    data[depths, np.arange(width)] = 1.0
    return Phantom(image=Image(data, bit_depth=16), bm_depths=depths)


def make_phantom(width: int, height: int, seed: int = 0, **kwargs) -> Image:
    return generate_phantom(width, height, seed, **kwargs).image


def phantom_corpus(count: int, size: Tuple[int, int] = (256, 256), seed: int = 0, **kwargs) -> List[Image]:
    """`count` phantoms of size (width, height), each from its own seed stream."""
    width, height = size
    return [
        make_phantom(width, height, seed=int(make_rng(seed, index).integers(2 ** 31)), **kwargs)
        for index in range(count)
    ]


def write_phantom_corpus(
    directory: Union[str, Path],
    count: int,
    size: Tuple[int, int] = (256, 256),
    seed: int = 0,
    suffix: str = '.png',
) -> List[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for index, img in enumerate(phantom_corpus(count, size, seed)):
        paths.append(save_image(img, directory / f"phantom_{index:03d}{suffix}"))
    logger.info(f"Wrote {count} phantom(s) of {size[0]}x{size[1]} to {directory}")
    return paths
