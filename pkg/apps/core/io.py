"""
Grayscale image and mask file I/O (binary PGM and PNG, 8 or 16 bit).
"""
import logging
from pathlib import Path
from typing import List, Union

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .constants import BIT_DEPTHS, SUPPORTED_IMAGE_SUFFIXES
from .exceptions import CorpusError, CorruptFile, UnsupportedFormat
from .image import Image, ShadowMask

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

EIGHT_BIT_MODES = {'L', '1'}
SIXTEEN_BIT_MODES = {'I', 'I;16', 'I;16B', 'I;16L'}


def _format_for(path: Path) -> str:
    fmt = SUPPORTED_IMAGE_SUFFIXES.get(path.suffix.lower())
    if fmt is None:
        supported = ', '.join(sorted(SUPPORTED_IMAGE_SUFFIXES))
        raise UnsupportedFormat(f"Unsupported image suffix '{path.suffix}' for {path} (expected {supported})")
    return fmt


def _read_samples(path: PathLike) -> tuple:
    """
    Read raw samples from disk.

    Returns:
        (samples as float64 array, bit depth)
    """
    path = Path(path)
    _format_for(path)
    try:
        with PILImage.open(path) as pil:
            pil.load()
            mode = pil.mode
            if mode in EIGHT_BIT_MODES:
                samples = np.asarray(pil.convert('L'), dtype=np.float64)
                depth = 8
            elif mode in SIXTEEN_BIT_MODES:
                samples = np.asarray(pil, dtype=np.float64)
                depth = 16
            else:
                raise UnsupportedFormat(f"{path} is not grayscale (Pillow mode '{mode}')")
    except FileNotFoundError as e:
        raise CorruptFile(f"Image file not found: {path}") from e
    except (UnidentifiedImageError, OSError, ValueError, SyntaxError) as e:
        raise CorruptFile(f"Could not decode {path}: {e}") from e

    if samples.ndim != 2 or samples.size == 0:
        raise CorruptFile(f"{path} decoded to an unexpected shape {samples.shape}")
    return samples, depth


def _max_code(bit_depth: int) -> int:
    return (1 << bit_depth) - 1


def load_image(path: PathLike) -> Image:
    """
    Load a grayscale image normalized to [0, 1].

    Raises:
        UnsupportedFormat: unknown suffix or non-grayscale content
        CorruptFile: missing or undecodable file
    """
    samples, depth = _read_samples(path)
    data = np.clip(samples / _max_code(depth), 0.0, 1.0)
    logger.debug(f"Loaded {path}: {data.shape[1]}x{data.shape[0]} at {depth} bit")
    return Image(data, bit_depth=depth)


def save_image(img: Image, path: PathLike, bit_depth: int = None) -> Path:
    """
    Write an image, quantizing to its bit depth (or the one given).

    Values are clipped to [0, 1] and rounded to the nearest code value.
    """
    path = Path(path)
    fmt = _format_for(path)
    depth = bit_depth or img.bit_depth
    if depth not in BIT_DEPTHS:
        raise UnsupportedFormat(f"Bit depth {depth} not supported (expected one of {BIT_DEPTHS})")

    codes = np.rint(np.clip(img.data, 0.0, 1.0) * _max_code(depth))
    if depth == 8:
        pil = PILImage.fromarray(codes.astype(np.uint8), mode='L')
    else:
        # Mode "I" is written as 16-bit big-endian by both encoders
        pil = PILImage.fromarray(codes.astype(np.int32), mode='I')

    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        pil.save(path, format=fmt)
    except OSError as e:
        raise CorruptFile(f"Could not write {path}: {e}") from e
    logger.debug(f"Saved {path} at {depth} bit")
    return path


def load_mask(path: PathLike) -> ShadowMask:
    """Load a mask file: 0 = shadowed, max code = reliable (threshold at half range)."""
    samples, depth = _read_samples(path)
    return ShadowMask(samples > _max_code(depth) / 2.0)


def save_mask(mask: ShadowMask, path: PathLike) -> Path:
    """Write a mask as an 8-bit image with 0 = shadowed and 255 = reliable."""
    return save_image(Image(mask.bits.astype(np.float64), bit_depth=8), path, bit_depth=8)


def list_images(directory: PathLike) -> List[Path]:
    """Sorted supported image files in a directory."""
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"Corpus directory not found: {directory}")
    return sorted(
        p for p in directory.iterdir()
        if p.is_file() and p.suffix.lower() in SUPPORTED_IMAGE_SUFFIXES
    )


def load_corpus(directory: PathLike) -> List[Image]:
    """
    Load every readable image in a directory.

    Unreadable files are skipped with a warning.

    Raises:
        CorpusError: if the directory is missing or holds no readable image
    """
    images = []
    for path in list_images(directory):
        try:
            images.append(load_image(path))
        except (CorruptFile, UnsupportedFormat) as e:
            logger.warning(f"Skipping corpus file {path}: {e}")

    if not images:
        raise CorpusError(f"No readable images in {directory}")
    logger.info(f"Loaded {len(images)} corpus image(s) from {directory}")
    return images
