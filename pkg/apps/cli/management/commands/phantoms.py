"""
Management command to write a seeded phantom B-scan corpus.
"""
from django.conf import settings

from apps.cli.base import InpaintCommand
from apps.evaluation.phantom import write_phantom_corpus


class Command(InpaintCommand):
    help = 'Write layered B-scan phantoms (curved membrane, retinal layers, speckle) to a directory'

    def add_command_arguments(self, parser):
        width, height = settings.OCT_INPAINT.get('PHANTOM_SIZE', (256, 256))
        parser.add_argument('directory', help='Output directory')
        parser.add_argument('--count', type=int, default=9, help='Number of phantoms (default: 9)')
        parser.add_argument('--width', type=int, default=width, help=f'Width in pixels (default: {width})')
        parser.add_argument('--height', type=int, default=height, help=f'Height in pixels (default: {height})')
        parser.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
        parser.add_argument('--format', choices=['png', 'pgm'], default='png', help='File format (default: png)')

    def run(self, **options):
        paths = write_phantom_corpus(
            options['directory'],
            options['count'],
            size=(options['width'], options['height']),
            seed=options['seed'],
            suffix=f".{options['format']}",
        )
        self.stdout.write(self.style.SUCCESS(f"Wrote {len(paths)} phantom(s) to {options['directory']}"))
