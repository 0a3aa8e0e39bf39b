"""
Base class for the inpainting management commands.
"""
import argparse
import logging
from typing import Optional, Tuple

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from apps.core.exceptions import ConfigError, InpaintingError
from apps.sparse.dictionary import Dictionary, load_dictionary
from .config import CliConfig, CliConfigSerializer, resolve_config

logger = logging.getLogger(__name__)

FIELD_TYPES = {
    serializers.IntegerField: int,
    serializers.FloatField: float,
}


def flag_name(key: str) -> str:
    return '--' + key.replace('_', '-')


class InpaintCommand(BaseCommand):
    """
    Adds a flag for every config key and a `--config` option, and maps
    inpainting errors to the fixed exit codes (2 IO, 3 config/data,
    4 algorithm).

    Subclasses implement `add_command_arguments` and `run`.
    """

    def add_arguments(self, parser):
        self.add_command_arguments(parser)

        group = parser.add_argument_group('configuration (flag > config file > default)')
        group.add_argument(
            '--config',
            default=None,
            help='Config file of key = value lines (default: $OCT_INPAINT_CONFIG)',
        )
        for key, field in CliConfigSerializer().fields.items():
            help_text = f"{field.help_text} (default: {field.default})"
            if isinstance(field, serializers.BooleanField):
                group.add_argument(
                    flag_name(key), dest=key, action=argparse.BooleanOptionalAction, default=None, help=help_text,
                )
            elif isinstance(field, serializers.ChoiceField):
                group.add_argument(
                    flag_name(key), dest=key, choices=list(field.choices), default=None, help=help_text,
                )
            else:
                group.add_argument(
                    flag_name(key), dest=key, type=FIELD_TYPES.get(type(field), str), default=None, help=help_text,
                )

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except InpaintingError as e:
            logger.error(f"{type(e).__name__}: {e}")
            raise CommandError(f"{type(e).__name__}: {e}", returncode=e.exit_code) from e

    def run(self, **options):
        raise NotImplementedError

    def load_config(self, options) -> CliConfig:
        flags = {key: options.get(key) for key in CliConfigSerializer().fields}
        return resolve_config(flags, options.get('config'))

    def load_dictionaries(self, cli: CliConfig, need_down: bool) -> Tuple[Dictionary, Optional[Dictionary]]:
        """
        Load the configured dictionaries.

        Raises:
            ConfigError: if a required dictionary path is not configured
        """
        if not cli.dict_full:
            raise ConfigError("No full-resolution dictionary configured (set dict_full)")
        dict_full = load_dictionary(cli.dict_full)
        dict_down = None
        if cli.dict_down:
            dict_down = load_dictionary(cli.dict_down)
        elif need_down:
            logger.warning("No downsampled dictionary configured; wide shadows will fail")
        return dict_full, dict_down
