"""
Management command to run the shadow-width sweep.
"""
import logging
from typing import List

from django.conf import settings

from apps.cli.base import InpaintCommand
from apps.core.constants import (
    DEFAULT_WIDTH_RANGE,
    METHOD_BASELINE,
    REGION_FULL,
    REGION_MASKED,
    SWEEP_METHODS,
    SYNTHETIC_PROTOCOL,
)
from apps.core.exceptions import ConfigError
from apps.core.io import load_corpus
from apps.evaluation.phantom import phantom_corpus
from apps.evaluation.sweep import (
    format_summary,
    plot_report,
    record_report,
    summarize,
    train_default_dictionaries,
    width_sweep,
)

logger = logging.getLogger(__name__)


def parse_widths(value: str) -> List[int]:
    """'7-24' (inclusive range) or '7,12,20'."""
    try:
        if '-' in value:
            lo, hi = (int(part) for part in value.split('-', 1))
            widths = list(range(lo, hi + 1))
        else:
            widths = [int(part) for part in value.split(',') if part.strip()]
    except ValueError:
        raise ConfigError(f"Widths must look like '7-24' or '7,12,20', got '{value}'")
    if not widths:
        raise ConfigError(f"No widths in '{value}'")
    return widths


def parse_methods(value: str) -> List[str]:
    methods = [part.strip() for part in value.split(',') if part.strip()]
    unknown = [m for m in methods if m not in SWEEP_METHODS]
    if unknown or not methods:
        raise ConfigError(f"Methods must be drawn from {', '.join(SWEEP_METHODS)}, got '{value}'")
    return methods


class Command(InpaintCommand):
    help = (
        'Inpaint synthetic shadows of each width with each method and write '
        'mean/std PSNR and SSIM per (method, width) as CSV'
    )

    def add_command_arguments(self, parser):
        lo, hi = DEFAULT_WIDTH_RANGE
        parser.add_argument('--out', required=True, help='Report CSV path')
        parser.add_argument('--plot', default=None, help='Also write a PNG plot of the metrics versus width')
        parser.add_argument(
            '--images', default=None, help='Directory of clean B-scans (default: generated phantoms)',
        )
        parser.add_argument(
            '--n-phantoms', type=int, default=SYNTHETIC_PROTOCOL['scans'],
            help=f"Phantoms generated when --images is omitted (default: {SYNTHETIC_PROTOCOL['scans']})",
        )
        parser.add_argument('--widths', default=f'{lo}-{hi}', help=f"'lo-hi' or comma list (default: {lo}-{hi})")
        parser.add_argument(
            '--methods', default=','.join(SWEEP_METHODS), help=f"Comma list (default: {','.join(SWEEP_METHODS)})",
        )
        parser.add_argument('--trials', type=int, default=3, help='Trials per width (default: 3)')
        parser.add_argument(
            '--shadows-per-image', type=int, default=None,
            help='Shadows per trial, capped at what fits (default: OCT_INPAINT setting)',
        )
        parser.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
        parser.add_argument('--full-image', action='store_true', help='Score whole images instead of shadowed pixels')
        parser.add_argument(
            '--train-iterations', type=int, default=None,
            help='K-SVD iterations when dictionaries are trained on phantoms (default: OCT_INPAINT setting)',
        )

    def run(self, **options):
        cli = self.load_config(options)
        cfg = cli.pipeline
        widths = parse_widths(options['widths'])
        methods = parse_methods(options['methods'])
        seed = options['seed']

        # Evaluation images
        if options['images']:
            images = load_corpus(options['images'])
            label = options['images']
        else:
            size = tuple(settings.OCT_INPAINT.get('PHANTOM_SIZE', (256, 256)))
            images = phantom_corpus(options['n_phantoms'], size, seed=seed)
            label = 'phantom corpus'

        # Dictionaries: configured files, else trained on separate phantoms
        dict_full = dict_down = None
        if any(m != METHOD_BASELINE for m in methods):
            if cfg.dict_full:
                dict_full, dict_down = self.load_dictionaries(cli, need_down=cfg.multiscale)
            else:
                self.stdout.write('No dictionaries configured; training on phantoms...')
                dict_full, dict_down = train_default_dictionaries(
                    cfg, seed=seed, iterations=options['train_iterations'],
                )

        report = width_sweep(
            images,
            widths,
            methods,
            trials=options['trials'],
            seed=seed,
            cfg=cfg,
            dict_full=dict_full,
            dict_down=dict_down,
            region=REGION_FULL if options['full_image'] else REGION_MASKED,
            shadows_per_image=options['shadows_per_image'],
            preprocess=cli.preprocess,
        )
        csv_path = report.to_csv(options['out'])
        if options['plot']:
            plot_report(report, options['plot'], title=f'Shadow width sweep ({label})')
        if settings.OCT_INPAINT.get('RECORD_RUNS', False):
            record_report(report, cfg, len(images), csv_path)

        self.stdout.write(format_summary(summarize(report), label=label))
        widths = report.widths
        if len(widths) > 1:
            for method in report.methods:
                drop = report.psnr_drop(method, widths[0], widths[-1])
                if drop is not None:
                    self.stdout.write(f"{method}: PSNR drop {widths[0]} -> {widths[-1]} px = {drop:.2f} dB")
        if report.failures:
            self.stdout.write(self.style.WARNING(f"{len(report.failures)} trial(s) failed; see log"))
        self.stdout.write(self.style.SUCCESS(f"Wrote {csv_path}"))
