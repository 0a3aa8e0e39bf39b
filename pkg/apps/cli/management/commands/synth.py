"""
Management command to place synthetic vessel shadows on a clean B-scan.
"""
from apps.cli.base import InpaintCommand
from apps.core.constants import DEFAULT_WIDTH_RANGE
from apps.core.io import load_image, save_image, save_mask
from apps.evaluation.synth import WIDTH_DISTRIBUTIONS, WIDTH_UNIFORM, synth_shadows
from apps.preproc.shadows import shadow_intervals, write_intervals_csv


class Command(InpaintCommand):
    help = 'Black out randomly placed full-height shadow bands and write the image and its mask'

    def add_command_arguments(self, parser):
        parser.add_argument('input', help='Clean B-scan')
        parser.add_argument('output', help='Corrupted image')
        parser.add_argument('mask', help='Mask of the synthetic shadows (0 = shadowed)')
        parser.add_argument('--count', type=int, default=1, help='Number of shadows (default: 1)')
        parser.add_argument(
            '--width-min', type=int, default=DEFAULT_WIDTH_RANGE[0],
            help=f'Narrowest shadow (default: {DEFAULT_WIDTH_RANGE[0]})',
        )
        parser.add_argument(
            '--width-max', type=int, default=DEFAULT_WIDTH_RANGE[1],
            help=f'Widest shadow (default: {DEFAULT_WIDTH_RANGE[1]})',
        )
        parser.add_argument(
            '--distribution', choices=WIDTH_DISTRIBUTIONS, default=WIDTH_UNIFORM,
            help='Width distribution (default: uniform)',
        )
        parser.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
        parser.add_argument('--intervals-csv', default=None, help='Write shadow intervals as start,width CSV')

    def run(self, **options):
        cli = self.load_config(options)
        img = load_image(options['input'])
        corrupted, mask = synth_shadows(
            img,
            options['count'],
            (options['width_min'], options['width_max']),
            seed=options['seed'],
            margin=cli.pipeline.context_margin,
            distribution=options['distribution'],
        )
        save_image(corrupted, options['output'], bit_depth=img.bit_depth)
        save_mask(mask, options['mask'])
        intervals = shadow_intervals(mask)
        if options['intervals_csv']:
            write_intervals_csv(intervals, options['intervals_csv'])

        self.stdout.write(
            f"Placed {len(intervals)} shadow(s): " + ', '.join(f"{start}+{width}" for start, width in intervals)
        )
        self.stdout.write(self.style.SUCCESS(f"Wrote {options['output']} and {options['mask']}"))
