"""
Dictionary-based inpainting (DI) and regularization (DR) of image strips.
"""
import logging
import threading
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from apps.core.exceptions import ConfigError, DimensionMismatch
from apps.core.image import Image, PatchGrid, ShadowMask
from apps.core.interpolation import interpolate_rows
from apps.core.patches import average_patches, patch_matrix
from .dictionary import Dictionary
from .omp import batch_omp, masked_omp_batch, reconstruct_batch, support_floor

logger = logging.getLogger(__name__)


@dataclass
class InpaintDiagnostics:
    """Thread-safe counters shared by the strips of one image."""
    coded_patches: int = 0
    fallback_patches: int = 0
    regularized_patches: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def add(self, coded: int = 0, fallback: int = 0, regularized: int = 0) -> None:
        with self._lock:
            self.coded_patches += coded
            self.fallback_patches += fallback
            self.regularized_patches += regularized


def _prepare(strip: Image, mask: ShadowMask, dictionary: Dictionary, grid: PatchGrid) -> PatchGrid:
    mask.check_pair(strip)
    grid = grid.for_region(strip.width, strip.height)
    if dictionary.atom_len != grid.atom_len:
        raise DimensionMismatch(
            f"Dictionary atom length {dictionary.atom_len} does not match "
            f"{grid.patch_w}x{grid.patch_h} patches"
        )
    return grid


def _assemble(strip: Image, reliable: np.ndarray, vectors: np.ndarray, grid: PatchGrid) -> Image:
    aggregated = average_patches(
        vectors, grid.positions, strip.width, strip.height, grid.patch_w, grid.patch_h
    )
    return strip.with_data(np.where(reliable, strip.data, aggregated))


def inpaint_strip(
    strip: Image,
    mask: ShadowMask,
    dictionary: Dictionary,
    grid: PatchGrid,
    sparsity: int,
    diagnostics: Optional[InpaintDiagnostics] = None,
    scale: int = 1,
) -> Image:
    """
    Fill the shadowed pixels of a strip from the dictionary.

    Every patch with a shadowed pixel is coded on its reliable rows only and
    replaced by its full reconstruction; other patches pass through. Patches
    with too few reliable rows are coded after a row-wise linear fill of
    their shadowed pixels instead. Overlaps are averaged and reliable
    pixels are restored from the input.

    Args:
        strip: Image strip to inpaint
        mask: Reliability mask of the strip (False = shadowed)
        dictionary: Dictionary at the strip's pixel scale
        grid: Patch geometry and strides
        sparsity: Atoms per patch
        diagnostics: Optional counters updated in place
        scale: Downsampling factor of the strip; must match the dictionary scale_tag

    Returns:
        Inpainted strip

    Raises:
        ConfigError: dictionary trained at another scale
    """
    if dictionary.scale_tag != scale:
        raise ConfigError(
            f"Dictionary has scale_tag {dictionary.scale_tag} but the strip is at scale {scale}"
        )
    grid = _prepare(strip, mask, dictionary, grid)
    if mask.shadow_count == 0:
        return strip

    values = patch_matrix(strip.data, grid)
    keeps = patch_matrix(mask.bits, grid)
    output = values.copy()

    needs = np.flatnonzero(~keeps.all(axis=1))
    patterns, inverse = np.unique(keeps[needs], axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    floor = support_floor(sparsity)

    fallback = []
    for p, keep in enumerate(patterns):
        members = needs[inverse == p]
        if keep.sum() < floor:
            fallback.append(members)
            continue
        support, coeffs = masked_omp_batch(dictionary, values[members][:, keep].T, keep, sparsity)
        output[members] = reconstruct_batch(dictionary.atoms, support, coeffs)

    n_fallback = 0
    if fallback:
        members = np.concatenate(fallback)
        n_fallback = members.size
        filled = patch_matrix(interpolate_rows(strip.data, mask.bits), grid)[members]
        support, coeffs = batch_omp(dictionary.atoms, dictionary.atoms, filled.T, sparsity)
        output[members] = reconstruct_batch(dictionary.atoms, support, coeffs)
        logger.warning(
            f"{n_fallback} patch(es) below the {floor}-row support floor coded from interpolated values"
        )

    if diagnostics is not None:
        diagnostics.add(coded=needs.size - n_fallback, fallback=n_fallback)
    logger.debug(f"Inpainted {strip.width}x{strip.height} strip: {needs.size} of {len(grid)} patches coded")
    return _assemble(strip, mask.bits, output, grid)


def regularize_strip(
    strip: Image,
    inpainted: ShadowMask,
    dictionary: Dictionary,
    grid: PatchGrid,
    sparsity: int,
    diagnostics: Optional[InpaintDiagnostics] = None,
) -> Image:
    """
    Re-code every patch touching an inpainted pixel against the full-resolution
    dictionary and replace it with its L-sparse reconstruction.

    `inpainted` marks inpainted pixels with False; all other pixels are
    restored from the input after aggregation.
    """
    grid = _prepare(strip, inpainted, dictionary, grid)
    if inpainted.shadow_count == 0:
        return strip

    values = patch_matrix(strip.data, grid)
    touched = np.flatnonzero(~patch_matrix(inpainted.bits, grid).all(axis=1))
    output = values.copy()
    support, coeffs = batch_omp(dictionary.atoms, dictionary.atoms, values[touched].T, sparsity)
    output[touched] = reconstruct_batch(dictionary.atoms, support, coeffs)

    if diagnostics is not None:
        diagnostics.add(regularized=touched.size)
    logger.debug(f"Regularized {touched.size} patch(es) of a {strip.width}x{strip.height} strip")
    return _assemble(strip, inpainted.bits, output, grid)
