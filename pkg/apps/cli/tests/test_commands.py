"""
Tests for the management commands.
"""
import csv
from io import StringIO

import numpy as np
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from apps.cli.management.commands.sweep import parse_methods, parse_widths
from apps.cli.management.commands.train_dict import parse_scale
from apps.core.constants import METHOD_BASELINE, METHOD_PROPOSED
from apps.core.exceptions import ConfigError
from apps.core.io import load_image, load_mask, save_image, save_mask
from apps.evaluation.phantom import phantom_corpus, write_phantom_corpus
from apps.preproc.services import Preprocessor
from apps.preproc.shadows import shadow_intervals
from apps.sparse.dictionary import Dictionary, load_dictionary, save_dictionary


def run(*args, **options):
    out = StringIO()
    call_command(*args, stdout=out, **options)
    return out.getvalue()


@pytest.fixture
def scan(tmp_path, phantom_image):
    return save_image(phantom_image, tmp_path / 'scan.png')


@pytest.fixture
def dictionary_file(tmp_path, rng):
    return save_dictionary(Dictionary(rng.standard_normal((64, 96))), tmp_path / 'full.octd')


def test_parsers():
    assert parse_scale('full') == 1
    assert parse_scale('down:4') == 4
    with pytest.raises(ConfigError):
        parse_scale('down:1')
    assert parse_widths('7-10') == [7, 8, 9, 10]
    assert parse_widths('7,12') == [7, 12]
    with pytest.raises(ConfigError):
        parse_widths('seven')
    assert parse_methods('proposed, baseline-interp') == [METHOD_PROPOSED, METHOD_BASELINE]
    with pytest.raises(ConfigError):
        parse_methods('proposed,magic')


def test_phantoms(tmp_path):
    output = run('phantoms', str(tmp_path / 'corpus'), count=2, width=64, height=48, format='pgm')
    written = sorted(p.name for p in (tmp_path / 'corpus').iterdir())
    assert written == ['phantom_000.pgm', 'phantom_001.pgm']
    assert load_image(tmp_path / 'corpus' / 'phantom_000.pgm').data.shape == (48, 64)
    assert 'Wrote 2 phantom(s)' in output


def test_synth_is_deterministic(tmp_path, scan):
    for name in ('a', 'b'):
        run(
            'synth', str(scan), str(tmp_path / f'{name}.png'), str(tmp_path / f'{name}-mask.png'),
            count=2, width_min=7, width_max=12, seed=3, intervals_csv=str(tmp_path / f'{name}.csv'),
        )
    assert (tmp_path / 'a.png').read_bytes() == (tmp_path / 'b.png').read_bytes()
    assert (tmp_path / 'a-mask.png').read_bytes() == (tmp_path / 'b-mask.png').read_bytes()

    with open(tmp_path / 'a.csv', newline='') as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ['start', 'width']
    assert len(rows) == 3
    mask = load_mask(tmp_path / 'a-mask.png')
    assert mask.shadowed_columns().sum() == sum(int(width) for _, width in rows[1:])


def test_eval_identical_images(scan):
    assert run('eval', str(scan), str(scan)).strip() == 'PSNR: inf, SSIM: 1.0'


def test_eval_with_mask(tmp_path, scan, phantom_image, make_mask):
    mask = make_mask(phantom_image.width, phantom_image.height, [(40, 10)])
    degraded = phantom_image.with_data(np.where(mask.bits, phantom_image.data, 0.0))
    test = save_image(degraded, tmp_path / 'test.png')
    mask_path = save_mask(mask, tmp_path / 'mask.png')

    masked = run('eval', str(scan), str(test), mask=str(mask_path))
    full = run('eval', str(scan), str(test), mask=str(mask_path), full_image=True)
    masked_psnr = float(masked.split(',')[0].split(':')[1])
    full_psnr = float(full.split(',')[0].split(':')[1])
    assert full_psnr > masked_psnr


def test_train_dict(tmp_path):
    write_phantom_corpus(tmp_path / 'corpus', 2, (96, 96), seed=2)

    output = run(
        'train_dict', str(tmp_path / 'corpus'), out=str(tmp_path / 'down.octd'),
        scale='down:4', iterations=2, n_atoms=16, seed=1,
    )

    dictionary = load_dictionary(tmp_path / 'down.octd')
    assert (dictionary.atom_len, dictionary.n_atoms, dictionary.scale_tag) == (64, 16, 4)
    assert 'Final mean representation error:' in output


def test_train_dict_is_reproducible(tmp_path):
    write_phantom_corpus(tmp_path / 'corpus', 2, (96, 96), seed=2)
    for name in ('a', 'b'):
        run(
            'train_dict', str(tmp_path / 'corpus'), out=str(tmp_path / f'{name}.octd'),
            iterations=2, n_atoms=16, seed=7,
        )
    assert (tmp_path / 'a.octd').read_bytes() == (tmp_path / 'b.octd').read_bytes()


def test_inpaint_with_known_mask(tmp_path, phantom_image, make_mask, dictionary_file):
    mask = make_mask(phantom_image.width, phantom_image.height, [(50, 5)])
    scan = save_image(phantom_image.with_data(np.where(mask.bits, phantom_image.data, 0.0)), tmp_path / 'in.png')
    mask_path = save_mask(mask, tmp_path / 'mask.png')

    output = run(
        'inpaint', str(scan), str(tmp_path / 'out.png'),
        mask=str(mask_path), dict_full=str(dictionary_file),
        emit_mask=str(tmp_path / 'used.png'), emit_intervals=str(tmp_path / 'intervals.csv'),
    )

    before, after = load_image(scan), load_image(tmp_path / 'out.png')
    assert after.bit_depth == before.bit_depth
    assert np.array_equal(after.data[mask.bits], before.data[mask.bits])
    assert np.array_equal(load_mask(tmp_path / 'used.png').bits, mask.bits)
    assert (tmp_path / 'intervals.csv').read_text() == 'start,width\n50,5\n'
    assert '1 shadow(s) (1 narrow, 0 wide)' in output


def test_inpaint_clean_scan_is_unchanged(tmp_path, scan, dictionary_file):
    output = run(
        'inpaint', str(scan), str(tmp_path / 'out.png'), dict_full=str(dictionary_file),
        emit_intervals=str(tmp_path / 'intervals.csv'),
    )

    before, after = load_image(scan), load_image(tmp_path / 'out.png')
    assert after.bit_depth == before.bit_depth
    assert np.array_equal(after.data, before.data)
    assert (tmp_path / 'intervals.csv').read_text() == 'start,width\n'
    assert '0 shadow(s)' in output


def test_emitted_mask_matches_detection(tmp_path, phantom_image, dictionary_file):
    data = phantom_image.data.copy()
    data[:, 60:72] *= 0.3
    scan = save_image(phantom_image.with_data(data), tmp_path / 'shadowed.png')

    run(
        'inpaint', str(scan), str(tmp_path / 'out.png'), dict_full=str(dictionary_file), multiscale=False,
        emit_mask=str(tmp_path / 'mask.png'), emit_intervals=str(tmp_path / 'intervals.csv'),
    )

    detected = Preprocessor().run(load_image(scan)).mask
    emitted = load_mask(tmp_path / 'mask.png')
    assert np.array_equal(emitted.bits, detected.bits)
    assert shadow_intervals(emitted) == shadow_intervals(detected) != []
    rows = (tmp_path / 'intervals.csv').read_text().splitlines()[1:]
    assert rows == [f'{start},{width}' for start, width in shadow_intervals(detected)]


def test_sweep_baseline(tmp_path):
    write_phantom_corpus(tmp_path / 'images', 2, (128, 96), seed=4)

    output = run(
        'sweep', out=str(tmp_path / 'sweep.csv'), plot=str(tmp_path / 'sweep.png'),
        images=str(tmp_path / 'images'), widths='7,12', methods=METHOD_BASELINE, trials=1,
    )

    with open(tmp_path / 'sweep.csv', newline='') as fh:
        rows = list(csv.reader(fh))
    assert [row[:2] for row in rows[1:]] == [[METHOD_BASELINE, '7'], [METHOD_BASELINE, '12']]
    assert (tmp_path / 'sweep.png').exists()
    assert 'Summary (' in output


@pytest.mark.parametrize('command, args, options, returncode', [
    ('eval', ['missing.png', 'missing.png'], {}, 2),
    ('train_dict', ['no-such-corpus'], {'out': 'x.octd'}, 2),
    ('train_dict', ['corpus'], {'out': 'x.octd', 'scale': 'down:1'}, 3),
    ('train_dict', ['corpus'], {'out': 'x.octd', 'n_atoms': 100000, 'iterations': 1}, 3),
    ('inpaint', ['scan.png', 'out.png'], {}, 3),
    ('sweep', [], {'out': 'x.csv', 'widths': '7-30', 'methods': METHOD_BASELINE, 'n_phantoms': 1}, 3),
])
def test_exit_codes(tmp_path, monkeypatch, scan, command, args, options, returncode):
    monkeypatch.chdir(tmp_path)
    write_phantom_corpus(tmp_path / 'corpus', 1, (64, 64), seed=0)

    with pytest.raises(CommandError) as excinfo:
        run(command, *args, **options)
    assert excinfo.value.returncode == returncode


def test_config_file_errors(tmp_path, scan):
    config = tmp_path / 'bad.conf'
    config.write_text('sparsity = 2\nunknown_key = 1\n')
    with pytest.raises(CommandError) as excinfo:
        run('synth', str(scan), str(tmp_path / 'o.png'), str(tmp_path / 'm.png'), config=str(config))
    assert excinfo.value.returncode == 3
