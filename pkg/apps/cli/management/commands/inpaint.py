"""
Management command to remove vessel shadows from one B-scan.
"""
import logging

from apps.cli.base import InpaintCommand
from apps.core.io import load_image, load_mask, save_image, save_mask
from apps.pipeline.service import ShadowRemovalService
from apps.preproc.shadows import write_intervals_csv

logger = logging.getLogger(__name__)


class Command(InpaintCommand):
    help = 'Detect (or read) vessel shadows in a B-scan and inpaint them'

    def add_command_arguments(self, parser):
        parser.add_argument('input', help='Input B-scan (PNG/PGM, 8 or 16 bit)')
        parser.add_argument('output', help='Output image; written at the input bit depth')
        parser.add_argument('--mask', default=None, help='Use this mask instead of detecting shadows')
        parser.add_argument('--emit-mask', default=None, help='Write the mask used to this file')
        parser.add_argument('--emit-intervals', default=None, help='Write shadow intervals as start,width CSV')

    def run(self, **options):
        cli = self.load_config(options)
        img = load_image(options['input'])
        mask = load_mask(options['mask']) if options['mask'] else None

        dict_full, dict_down = self.load_dictionaries(cli, need_down=cli.pipeline.multiscale)
        service = ShadowRemovalService(cli.pipeline, dict_full, dict_down, preprocess=cli.preprocess)
        result = service.remove_shadows(img, mask, source=options['input'])

        save_image(result.image, options['output'], bit_depth=img.bit_depth)
        if options['emit_mask']:
            save_mask(result.mask, options['emit_mask'])
        if options['emit_intervals']:
            write_intervals_csv(result.intervals, options['emit_intervals'])

        counts = result.inpaint.plan.shadow_counts()
        self.stdout.write(
            f"{len(result.intervals)} shadow(s) "
            f"({counts.get('narrow', 0)} narrow, {counts.get('wide', 0)} wide) "
            f"in {result.inpaint.execution_time_ms}ms"
        )
        self.stdout.write(self.style.SUCCESS(f"Wrote {options['output']}"))
