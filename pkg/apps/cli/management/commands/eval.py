"""
Management command to score an inpainted image against its reference.
"""
from apps.cli.base import InpaintCommand
from apps.core.io import load_image, load_mask
from apps.evaluation.metrics import psnr, ssim


class Command(InpaintCommand):
    help = 'Print PSNR and SSIM of a test image against a reference, over the shadowed region of a mask'

    def add_command_arguments(self, parser):
        parser.add_argument('reference', help='Reference (clean) image')
        parser.add_argument('test', help='Image under test')
        parser.add_argument('--mask', default=None, help='Score only the shadowed pixels of this mask')
        parser.add_argument('--full-image', action='store_true', help='Score the whole image even with --mask')

    def run(self, **options):
        ref = load_image(options['reference'])
        test = load_image(options['test'])
        region = None
        if options['mask'] and not options['full_image']:
            region = load_mask(options['mask'])

        score_psnr = psnr(ref, test, region)
        score_ssim = ssim(ref, test, region)
        self.stdout.write(f"PSNR: {round(score_psnr, 4)}, SSIM: {round(score_ssim, 4)}")
