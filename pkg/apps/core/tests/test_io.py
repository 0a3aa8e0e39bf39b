"""
Tests for image and mask file I/O.
"""
import numpy as np
import pytest

from apps.core.exceptions import CorpusError, CorruptFile, UnsupportedFormat
from apps.core.image import Image, ShadowMask
from apps.core.io import list_images, load_corpus, load_image, load_mask, save_image, save_mask


def coded_image(depth, shape=(6, 10)):
    top = (1 << depth) - 1
    codes = np.arange(np.prod(shape)).reshape(shape) * 997 % (top + 1)
    return Image(codes / top, bit_depth=depth)


@pytest.mark.parametrize('suffix,depth', [('.png', 16), ('.png', 8), ('.pgm', 8), ('.pgm', 16)])
def test_round_trip_is_exact_on_code_values(tmp_path, suffix, depth):
    img = coded_image(depth)
    path = save_image(img, tmp_path / f'img{suffix}')
    loaded = load_image(path)
    assert loaded.bit_depth == depth
    assert np.array_equal(loaded.data, img.data)


def test_save_clips_and_quantizes(tmp_path):
    img = Image(np.array([[-0.5, 0.5, 1.5]]), bit_depth=8)
    loaded = load_image(save_image(img, tmp_path / 'clip.png'))
    assert loaded.data.tolist() == [[0.0, 128 / 255, 1.0]]


def test_unsupported_suffix(tmp_path):
    with pytest.raises(UnsupportedFormat):
        save_image(Image(np.zeros((2, 2))), tmp_path / 'img.tiff')
    with pytest.raises(UnsupportedFormat):
        load_image(tmp_path / 'img.jpg')


def test_missing_and_corrupt_files(tmp_path):
    with pytest.raises(CorruptFile):
        load_image(tmp_path / 'missing.png')
    bad = tmp_path / 'bad.png'
    bad.write_bytes(b'not an image')
    with pytest.raises(CorruptFile):
        load_image(bad)


def test_mask_round_trip(tmp_path):
    mask = ShadowMask.from_intervals([(3, 4)], width=12, height=5)
    loaded = load_mask(save_mask(mask, tmp_path / 'mask.png'))
    assert np.array_equal(loaded.bits, mask.bits)


def test_corpus_skips_unreadable_files(tmp_path):
    save_image(coded_image(8), tmp_path / 'a.png')
    save_image(coded_image(16), tmp_path / 'b.pgm')
    (tmp_path / 'c.png').write_bytes(b'garbage')
    (tmp_path / 'notes.txt').write_text('ignored')

    assert [p.name for p in list_images(tmp_path)] == ['a.png', 'b.pgm', 'c.png']
    assert len(load_corpus(tmp_path)) == 2


def test_empty_corpus(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus(tmp_path)
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / 'missing')
