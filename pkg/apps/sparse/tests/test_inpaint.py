"""
Tests for dictionary-based strip inpainting and regularization.
"""
import numpy as np
import pytest

from apps.core.exceptions import ConfigError, DimensionMismatch
from apps.core.image import Image, PatchGrid, ShadowMask
from apps.evaluation.baseline import inpaint_baseline_interp
from apps.evaluation.metrics import psnr
from apps.sparse.dictionary import Dictionary
from apps.sparse.inpaint import InpaintDiagnostics, inpaint_strip, regularize_strip
from apps.sparse.omp import omp, reconstruct

GRID = PatchGrid(patch_w=8, patch_h=8)


def structured_dictionary(scale_tag=1, with_ramp=True):
    """Constant, centred horizontal ramp and centred vertical ramp atoms."""
    ys, xs = np.mgrid[0:8, 0:8].astype(float)
    atoms = [np.ones(64)]
    if with_ramp:
        atoms.append((xs - 3.5).reshape(-1))
    atoms.append((ys - 3.5).reshape(-1))
    return Dictionary(np.stack(atoms, axis=1), scale_tag=scale_tag)


def ramp_strip(width=40, height=16):
    return Image(np.tile(0.2 + 0.01 * np.arange(width), (height, 1)))


def corrupt(img, mask):
    return img.with_data(np.where(mask.bits, img.data, 0.0))


def test_exact_on_representable_strip():
    clean = ramp_strip()
    mask = ShadowMask.from_intervals([(16, 6)], clean.width, clean.height)
    diagnostics = InpaintDiagnostics()

    out = inpaint_strip(corrupt(clean, mask), mask, structured_dictionary(), GRID, 2, diagnostics)

    assert np.allclose(out.data, clean.data, atol=1e-9)
    assert diagnostics.coded_patches > 0
    assert diagnostics.fallback_patches == 0


def test_reliable_pixels_are_untouched(rng):
    strip = Image(rng.random((16, 40)))
    mask = ShadowMask.from_intervals([(10, 5)], strip.width, strip.height)
    dictionary = Dictionary(rng.standard_normal((64, 96)))
    out = inpaint_strip(strip, mask, dictionary, GRID, 2)
    assert np.array_equal(out.data[mask.bits], strip.data[mask.bits])


def test_clean_strip_is_returned_as_is(rng):
    strip = Image(rng.random((16, 20)))
    out = inpaint_strip(strip, ShadowMask.all_reliable(20, 16), structured_dictionary(), GRID, 2)
    assert out is strip


def test_fallback_below_support_floor():
    clean = Image(np.full((16, 40), 0.5))
    mask = ShadowMask.from_intervals([(16, 8)], 40, 16)
    diagnostics = InpaintDiagnostics()

    out = inpaint_strip(
        corrupt(clean, mask), mask, structured_dictionary(with_ramp=False), GRID, 2, diagnostics,
    )

    assert diagnostics.fallback_patches > 0
    assert np.allclose(out.data, 0.5, atol=1e-9)


def test_regularize_keeps_representable_content():
    clean = ramp_strip()
    inpainted = ShadowMask.from_intervals([(12, 10)], clean.width, clean.height)
    diagnostics = InpaintDiagnostics()

    out = regularize_strip(clean, inpainted, structured_dictionary(), GRID, 2, diagnostics)

    assert np.allclose(out.data, clean.data, atol=1e-9)
    assert diagnostics.regularized_patches == 9 * 17


def test_atom_length_must_match_grid(rng):
    strip = Image(rng.random((16, 20)))
    mask = ShadowMask.from_intervals([(5, 3)], 20, 16)
    with pytest.raises(DimensionMismatch):
        inpaint_strip(strip, mask, Dictionary(rng.standard_normal((49, 60))), GRID, 2)


def test_dictionary_scale_must_match_strip():
    clean = ramp_strip()
    mask = ShadowMask.from_intervals([(16, 6)], clean.width, clean.height)

    with pytest.raises(ConfigError):
        inpaint_strip(clean, mask, structured_dictionary(scale_tag=4), GRID, 2)
    with pytest.raises(ConfigError):
        inpaint_strip(clean, mask, structured_dictionary(), GRID, 2, scale=4)

    out = inpaint_strip(corrupt(clean, mask), mask, structured_dictionary(scale_tag=4), GRID, 2, scale=4)
    assert np.allclose(out.data, clean.data, atol=1e-9)


def test_narrow_band_beats_linear_interpolation(trained_dictionaries, phantom_image):
    dict_full, _ = trained_dictionaries
    mask = ShadowMask.from_intervals([(30, 6), (80, 6), (125, 6)], phantom_image.width, phantom_image.height)
    corrupted = corrupt(phantom_image, mask)

    out = inpaint_strip(corrupted, mask, dict_full, GRID, 2)
    baseline = inpaint_baseline_interp(corrupted, mask)

    assert psnr(phantom_image, out, mask) > psnr(phantom_image, baseline, mask)


def test_regularize_replaces_patch_with_its_code(rng):
    strip = Image(rng.random((8, 8)))
    inpainted = ShadowMask.from_intervals([(3, 2)], 8, 8)
    dictionary = Dictionary(rng.standard_normal((64, 96)))

    out = regularize_strip(strip, inpainted, dictionary, GRID, 2)

    code = omp(dictionary, strip.data.reshape(-1), 2)
    recoded = reconstruct(dictionary, code).reshape(8, 8)
    expected = np.where(inpainted.bits, strip.data, recoded)
    assert len(code) == 2
    assert np.allclose(out.data, expected, atol=1e-12)


def test_regularize_leaves_clean_columns_alone(rng):
    strip = Image(rng.random((16, 40)))
    inpainted = ShadowMask.from_intervals([(15, 6)], strip.width, strip.height)
    dictionary = Dictionary(rng.standard_normal((64, 96)))

    out = regularize_strip(strip, inpainted, dictionary, GRID, 2)

    clean_columns = ~inpainted.shadowed_columns()
    assert np.array_equal(out.data[:, clean_columns], strip.data[:, clean_columns])
    assert not np.allclose(out.data[:, 15:21], strip.data[:, 15:21])
