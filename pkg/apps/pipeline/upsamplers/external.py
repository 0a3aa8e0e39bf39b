"""
Upsampler delegating to an external command (e.g. a super-resolution network).

The command is called once per strip as
`<cmd> --scale N --in <tmp-in.pgm> --out <tmp-out.pgm>` and must write a
graymap of exactly N times the input dimensions, then exit 0.
"""
import logging
import shlex
import subprocess
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np

from apps.core.exceptions import ConfigError, ImageIOError, UpsamplerFailed
from apps.core.image import Image
from apps.core.io import load_image, save_image
from .base import BaseUpsampler

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT_SECONDS = 600


class ExternalCommandUpsampler(BaseUpsampler):
    """
    Runs a configured command on temporary 16-bit PGM files.
    """

    METHOD_NAME = 'external'

    def __init__(self, command: Optional[str] = None, timeout: Optional[int] = None):
        super().__init__()
        # OCT_INPAINT_UPSAMPLER takes precedence over the configured command
        self.command = self.settings.get('UPSAMPLER_COMMAND') or command or ''
        if not self.command.strip():
            raise ConfigError(
                "External upsampler selected but no command configured "
                "(set upsampler_command or OCT_INPAINT_UPSAMPLER)"
            )
        self.timeout = timeout or DEFAULT_TIMEOUT_SECONDS

    def _upsample(self, data: np.ndarray, factor: int) -> np.ndarray:
        with tempfile.TemporaryDirectory(prefix='oct-upsample-') as workdir:
            source = Path(workdir) / 'in.pgm'
            target = Path(workdir) / 'out.pgm'
            save_image(Image(data, bit_depth=16), source)

            args = shlex.split(self.command) + [
                '--scale', str(factor), '--in', str(source), '--out', str(target),
            ]
            logger.debug(f"Running external upsampler: {' '.join(args)}")
            try:
                result = subprocess.run(args, capture_output=True, text=True, timeout=self.timeout)
            except (OSError, subprocess.SubprocessError) as e:
                raise UpsamplerFailed(f"Could not run upsampler '{self.command}': {e}") from e

            if result.returncode != 0:
                stderr = (result.stderr or '').strip()[-500:]
                raise UpsamplerFailed(
                    f"Upsampler '{self.command}' exited with {result.returncode}: {stderr}"
                )
            try:
                return load_image(target).data
            except ImageIOError as e:
                raise UpsamplerFailed(f"Upsampler '{self.command}' wrote no readable output: {e}") from e
