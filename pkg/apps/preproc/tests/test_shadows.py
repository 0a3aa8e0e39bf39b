"""
Tests for shadow detection and interval bookkeeping.
"""
import numpy as np
import pytest

from apps.core.exceptions import InsufficientData
from apps.core.image import ShadowMask
from apps.evaluation.phantom import make_phantom
from apps.preproc.bm import detect_bm
from apps.preproc.services import Preprocessor
from apps.preproc.shadows import (
    ShadowParams,
    detect_shadows,
    read_intervals_csv,
    runs,
    shadow_intervals,
    write_intervals_csv,
)


def attenuate(img, start, width, factor=0.3):
    data = img.data.copy()
    data[:, start:start + width] *= factor
    return img.with_data(data)


def test_runs():
    flags = np.array([1, 1, 0, 0, 1, 0, 1, 1, 1], dtype=bool)
    assert runs(flags) == [(0, 2), (4, 1), (6, 3)]
    assert runs(np.zeros(4, dtype=bool)) == []


def test_clean_phantom_has_no_shadow(phantom_image):
    mask = Preprocessor().run(phantom_image).mask
    assert mask.shadow_count == 0


def test_detects_attenuated_band(phantom_image):
    img = attenuate(phantom_image, 60, 12)
    assert shadow_intervals(Preprocessor().run(img).mask) == [(58, 16)]


@pytest.mark.parametrize('seed', range(100))
def test_detected_endpoints_match_band(seed):
    rng = np.random.default_rng(seed)
    width = int(rng.integers(6, 21))
    start = int(rng.integers(20, 140 - width))
    img = attenuate(make_phantom(160, 128, seed=100 + seed), start, width)

    intervals = shadow_intervals(Preprocessor().run(img).mask)
    assert len(intervals) == 1
    found_start, found_width = intervals[0]
    assert abs(found_start - (start - 2)) <= 1
    assert abs(found_start + found_width - (start + width + 2)) <= 1


@pytest.mark.parametrize('shift', [0, 5])
def test_detection_follows_the_band(phantom_image, shift):
    img = attenuate(phantom_image, 100 + shift, 12)
    assert shadow_intervals(Preprocessor().run(img).mask) == [(98 + shift, 16)]


def test_margin_and_grouping(phantom_image):
    # Two bands 3 columns apart merge under the default dilation of 2
    img = attenuate(attenuate(phantom_image, 50, 6), 59, 6)
    intervals = shadow_intervals(Preprocessor().run(img).mask)
    assert intervals == [(48, 19)]

    params = ShadowParams(dilation=0, margin=0)
    profile = Preprocessor().fit_profile(img)
    assert shadow_intervals(detect_shadows(img, profile, params)) == [(50, 6), (59, 6)]


def test_requires_fitted_profile(phantom_image):
    with pytest.raises(InsufficientData):
        detect_shadows(phantom_image, detect_bm(phantom_image))


def test_provided_mask_skips_detection(phantom_image):
    mask = ShadowMask.from_intervals([(10, 5)], phantom_image.width, phantom_image.height)
    assert Preprocessor().run(phantom_image, mask).mask is mask


def test_intervals_csv(tmp_path):
    path = write_intervals_csv([(3, 7), (40, 12)], tmp_path / 'intervals.csv')
    assert path.read_text() == 'start,width\n3,7\n40,12\n'
    assert read_intervals_csv(path) == [(3, 7), (40, 12)]
