"""
Shared fixtures: phantoms, shadow masks and small trained dictionaries.
"""
import numpy as np
import pytest

from apps.core.image import Image, ShadowMask
from apps.evaluation.phantom import generate_phantom, phantom_corpus
from apps.pipeline.config import PipelineConfig
from apps.pipeline.training import DictionaryTrainingService

TRAINING_SIZE = (128, 128)
TRAINING_BUDGET = 1500
TRAINING_ITERATIONS = 6


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def phantom():
    """A 160x128 phantom with its true membrane rows."""
    return generate_phantom(160, 128, seed=7)


@pytest.fixture
def phantom_image(phantom):
    return phantom.image


@pytest.fixture
def ramp_image():
    """Horizontal ramp 0..1 over 64 columns, 32 rows."""
    return Image(np.tile(np.linspace(0.0, 1.0, 64), (32, 1)))


def column_mask(width, height, intervals):
    return ShadowMask.from_intervals(intervals, width, height)


@pytest.fixture
def make_mask():
    return column_mask


@pytest.fixture(scope='session')
def pipeline_config():
    return PipelineConfig(threads=1)


@pytest.fixture(scope='session')
def trained_dictionaries(pipeline_config):
    """(full, downsampled) dictionaries learned on a small phantom corpus."""
    corpus = phantom_corpus(4, TRAINING_SIZE, seed=99)
    service = DictionaryTrainingService(pipeline_config, record=False)
    service.patch_budget = TRAINING_BUDGET
    dict_full = service.train(corpus, scale=1, seed=5, iterations=TRAINING_ITERATIONS).dictionary
    dict_down = service.train(
        corpus, scale=pipeline_config.downsample_factor, seed=5, iterations=TRAINING_ITERATIONS,
    ).dictionary
    return dict_full, dict_down
