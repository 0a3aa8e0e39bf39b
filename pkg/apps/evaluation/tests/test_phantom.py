"""
Tests for the phantom generator.
"""
import numpy as np

from apps.core.io import list_images
from apps.evaluation.phantom import generate_phantom, phantom_corpus, write_phantom_corpus


def test_deterministic():
    first = generate_phantom(96, 64, seed=3)
    second = generate_phantom(96, 64, seed=3)
    assert np.array_equal(first.image.data, second.image.data)
    assert np.array_equal(first.bm_depths, second.bm_depths)
    assert not np.array_equal(first.image.data, generate_phantom(96, 64, seed=4).image.data)


def test_membrane_is_column_maximum(phantom):
    data = phantom.image.data
    assert data.shape == (128, 160)
    assert np.array_equal(np.argmax(data, axis=0), phantom.bm_depths)
    assert data.min() >= 0.0 and data.max() <= 1.0


def test_corpus_members_differ():
    corpus = phantom_corpus(3, (64, 48), seed=0)
    assert [(img.width, img.height) for img in corpus] == [(64, 48)] * 3
    assert not np.array_equal(corpus[0].data, corpus[1].data)


def test_write_corpus(tmp_path):
    paths = write_phantom_corpus(tmp_path / 'phantoms', 2, (40, 32), seed=1, suffix='.pgm')
    assert [p.name for p in paths] == ['phantom_000.pgm', 'phantom_001.pgm']
    assert list_images(tmp_path / 'phantoms') == paths
