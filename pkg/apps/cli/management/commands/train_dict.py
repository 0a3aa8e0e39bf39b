"""
Management command to train a dictionary from a corpus of B-scans.
"""
import logging

from apps.cli.base import InpaintCommand
from apps.core.exceptions import ConfigError
from apps.pipeline.training import DictionaryTrainingService

logger = logging.getLogger(__name__)


def parse_scale(value: str) -> int:
    """'full' -> 1, 'down:N' -> N."""
    if value == 'full':
        return 1
    prefix, _, factor = value.partition(':')
    if prefix == 'down' and factor.isdigit() and int(factor) >= 2:
        return int(factor)
    raise ConfigError(f"Scale must be 'full' or 'down:N' with N >= 2, got '{value}'")


class Command(InpaintCommand):
    help = 'Train a K-SVD dictionary on every image of a corpus directory and write an OCTD file'

    def add_command_arguments(self, parser):
        parser.add_argument('corpus', help='Directory of training B-scans (PNG/PGM)')
        parser.add_argument('--out', required=True, help='Output dictionary file')
        parser.add_argument('--scale', default='full', help="'full' or 'down:N' (default: full)")
        parser.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
        parser.add_argument(
            '--iterations', type=int, default=None, help='K-SVD iterations (default: OCT_INPAINT setting)',
        )
        parser.add_argument(
            '--no-flatten', action='store_true', help='Sample patches from unflattened images',
        )

    def run(self, **options):
        cli = self.load_config(options)
        scale = parse_scale(options['scale'])
        if scale != 1 and scale != cli.pipeline.downsample_factor:
            logger.warning(
                f"Training at scale {scale} but downsample_factor is {cli.pipeline.downsample_factor}"
            )

        service = DictionaryTrainingService(cli.pipeline, preprocess=cli.preprocess)
        result = service.train_to_file(
            options['corpus'],
            options['out'],
            scale=scale,
            seed=options['seed'],
            iterations=options['iterations'],
            flatten=not options['no_flatten'],
        )

        self.stdout.write(
            f"Trained {result.dictionary.atom_len}x{result.dictionary.n_atoms} dictionary "
            f"(scale {scale}) on {result.n_patches} patches from {result.n_images} image(s) "
            f"in {result.training_time_ms}ms"
        )
        self.stdout.write(f"Final mean representation error: {result.final_error:.6g}")
        self.stdout.write(self.style.SUCCESS(f"Wrote {result.path}"))
