"""
Tests for corpus patch sampling and dictionary training.
"""
import numpy as np
import pytest

from apps.core.image import Image
from apps.core.io import save_image
from apps.core.utils import file_sha256
from apps.evaluation.phantom import phantom_corpus
from apps.pipeline.config import PipelineConfig
from apps.pipeline.training import DictionaryTrainingService
from apps.sparse.dictionary import load_dictionary
from apps.sparse.models import DictionaryRecord


@pytest.fixture
def small_config():
    return PipelineConfig(n_atoms=16, threads=1)


@pytest.fixture
def service(small_config):
    return DictionaryTrainingService(small_config, record=False)


def half_flat_image(rng):
    data = np.full((32, 48), 0.3)
    data[:, 24:] = rng.random((32, 24))
    return Image(data)


def test_flat_patches_are_skipped(service, rng):
    patches = service.sample_patches(half_flat_image(rng), np.random.default_rng(0))

    assert patches.shape[1] == 64
    # Windows starting at column <= 16 are flat; the rest overlap the noise
    assert len(patches) == 25 * 24
    assert np.all(patches.var(axis=1) >= service.variance_floor)


def test_patch_budget(service, rng):
    service.patch_budget = 50
    patches = service.sample_patches(half_flat_image(rng), np.random.default_rng(0))
    assert len(patches) == 50


def test_sampling_is_deterministic(service):
    corpus = phantom_corpus(2, (64, 64), seed=3)
    service.patch_budget = 200
    first = service.collect(corpus, scale=1, seed=11)
    second = service.collect(corpus, scale=1, seed=11)
    assert first.shape == (400, 64)
    assert np.array_equal(first, second)


def test_downsampled_training(service):
    corpus = phantom_corpus(2, (96, 96), seed=3)
    result = service.train(corpus, scale=4, seed=0, iterations=2)
    assert result.dictionary.scale_tag == 4
    assert result.n_images == 2
    assert 0 < result.n_patches <= 2 * 17 * 17
    assert len(result.error_history) == 2


@pytest.mark.django_db
def test_train_to_file_records_run(small_config, tmp_path):
    corpus_dir = tmp_path / 'corpus'
    for index, img in enumerate(phantom_corpus(2, (64, 64), seed=1)):
        save_image(img, corpus_dir / f'scan{index}.png')
    out = tmp_path / 'dict.octd'

    service = DictionaryTrainingService(small_config, record=True)
    result = service.train_to_file(corpus_dir, out, seed=4, iterations=2)

    assert result.path == out
    assert load_dictionary(out).n_atoms == 16
    record = DictionaryRecord.objects.get()
    assert record.sha256 == file_sha256(out)
    assert record.iterations == 2
    assert record.n_images == 2
    assert record.final_error == pytest.approx(result.final_error)
