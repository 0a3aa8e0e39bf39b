"""
Run configuration for the commands: a `key = value` file plus flags.

Values resolve as command-line flag > config file > built-in default. The
config file path comes from `--config` or the OCT_INPAINT_CONFIG setting.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

from decouple import RepositoryEnv
from django.conf import settings
from rest_framework import serializers

from apps.core import constants
from apps.core.exceptions import ConfigError
from apps.pipeline.config import UPSAMPLER_CHOICES, PipelineConfig
from apps.preproc.services import PreprocessParams
from apps.preproc.shadows import ShadowParams

logger = logging.getLogger(__name__)

PIPELINE_KEYS = [
    'patch_w', 'patch_h', 'sparsity', 'n_atoms', 'downsample_factor', 'width_threshold',
    'stride_x', 'stride_y', 'context_margin', 'max_expected_width', 'upsampler',
    'upsampler_command', 'dict_full', 'dict_down', 'multiscale', 'threads',
]
SHADOW_KEYS = [
    'min_robust_weight', 'intensity_factor', 'rolling_window', 'tissue_half_height', 'dilation', 'margin',
]
PREPROCESS_KEYS = ['darkness_floor', 'loess_span', 'robust_iters', 'min_residual_scale', 'target_depth']


class CliConfigSerializer(serializers.Serializer):
    """Every configurable key with its type, range and default."""

    # Patch geometry and coding
    patch_w = serializers.IntegerField(
        min_value=1, default=constants.DEFAULT_PATCH_W, help_text='Patch width a (px)')
    patch_h = serializers.IntegerField(
        min_value=1, default=constants.DEFAULT_PATCH_H, help_text='Patch height b (px)')
    sparsity = serializers.IntegerField(
        min_value=1, default=constants.DEFAULT_SPARSITY, help_text='Nonzero coefficients per patch')
    n_atoms = serializers.IntegerField(
        min_value=1, default=constants.DEFAULT_N_ATOMS, help_text='Dictionary atoms')
    stride_x = serializers.IntegerField(min_value=1, default=1, help_text='Horizontal patch stride')
    stride_y = serializers.IntegerField(min_value=1, default=1, help_text='Vertical patch stride')

    # Routing and multi-scale branch
    downsample_factor = serializers.IntegerField(
        min_value=1, default=constants.DEFAULT_DOWNSAMPLE_FACTOR, help_text='Downsampling factor N')
    width_threshold = serializers.IntegerField(
        min_value=1, default=constants.DEFAULT_WIDTH_THRESHOLD,
        help_text='Shadows at least this wide take the multi-scale branch')
    context_margin = serializers.IntegerField(
        min_value=0, default=constants.DEFAULT_CONTEXT_MARGIN, help_text='Reliable context columns per side')
    max_expected_width = serializers.IntegerField(
        min_value=1, default=constants.DEFAULT_MAX_EXPECTED_WIDTH, help_text='Widest shadow to support (px)')
    multiscale = serializers.BooleanField(default=True, help_text='Route wide shadows through the multi-scale branch')
    upsampler = serializers.ChoiceField(
        choices=UPSAMPLER_CHOICES, default=UPSAMPLER_CHOICES[0], help_text='Upsampling method')
    upsampler_command = serializers.CharField(
        allow_blank=True, default='', help_text='External upsampler command (called with --scale N --in FILE --out FILE)')

    # Paths
    dict_full = serializers.CharField(allow_blank=True, default='', help_text='Full-resolution dictionary file')
    dict_down = serializers.CharField(allow_blank=True, default='', help_text='Downsampled dictionary file')

    # Preprocessing
    darkness_floor = serializers.FloatField(
        min_value=0.0, default=constants.DEFAULT_DARKNESS_FLOOR, help_text='Columns darker than this have no membrane')
    loess_span = serializers.FloatField(
        min_value=0.0, max_value=1.0, default=constants.DEFAULT_LOESS_SPAN, help_text='LOESS span (fraction of width)')
    robust_iters = serializers.IntegerField(
        min_value=0, default=constants.DEFAULT_ROBUST_ITERS, help_text='Robust LOESS reweighting passes')
    min_residual_scale = serializers.FloatField(
        min_value=0.0, default=constants.DEFAULT_MIN_RESIDUAL_SCALE, help_text='Lower bound on residual scale (px)')
    target_depth = serializers.IntegerField(
        min_value=0, allow_null=True, default=None, help_text='Flattened membrane row (median fit when omitted)')
    min_robust_weight = serializers.FloatField(
        min_value=0.0, max_value=1.0, default=constants.DEFAULT_MIN_ROBUST_WEIGHT,
        help_text='Robust weight below which a column is a shadow candidate')
    intensity_factor = serializers.FloatField(
        min_value=0.0, default=constants.DEFAULT_INTENSITY_FACTOR,
        help_text='Column darker than this fraction of its neighbourhood is a candidate')
    rolling_window = serializers.IntegerField(
        min_value=1, default=constants.DEFAULT_ROLLING_WINDOW, help_text='Rolling median window (columns)')
    tissue_half_height = serializers.IntegerField(
        min_value=0, default=constants.DEFAULT_TISSUE_HALF_HEIGHT, help_text='Rows above/below the membrane averaged')
    dilation = serializers.IntegerField(
        min_value=0, default=constants.DEFAULT_DILATION, help_text='Candidate grouping dilation (columns)')
    margin = serializers.IntegerField(
        min_value=0, default=constants.DEFAULT_SHADOW_MARGIN, help_text='Columns added to each side of a shadow')

    # Parallelism
    threads = serializers.IntegerField(
        min_value=0, allow_null=True, default=None, help_text='Worker threads (0 or omitted: all cores)')

    def validate(self, attrs):
        # Cross-field constraints live in PipelineConfig
        try:
            PipelineConfig(**{key: attrs[key] for key in PIPELINE_KEYS})
        except ConfigError as e:
            raise serializers.ValidationError(str(e))
        return attrs


@dataclass(frozen=True)
class CliConfig:
    pipeline: PipelineConfig
    preprocess: PreprocessParams
    source: Optional[Path] = None

    @property
    def dict_full(self) -> Optional[str]:
        return self.pipeline.dict_full

    @property
    def dict_down(self) -> Optional[str]:
        return self.pipeline.dict_down


def config_keys():
    return list(CliConfigSerializer().fields.keys())


def load_config_file(path) -> Dict[str, str]:
    """
    Read a `key = value` file; blank lines and `#` comments are ignored.

    Raises:
        ConfigError: if the file is missing, has a line that is not `key = value`
            or names an unknown key
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    with open(path) as fh:
        for number, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            key, sep, _ = line.partition('=')
            if not sep or not key.strip():
                raise ConfigError(f"{path}:{number}: expected 'key = value', got '{line}'")
    values = dict(RepositoryEnv(str(path)).data)

    known = set(config_keys())
    for key in values:
        if key not in known:
            raise ConfigError(f"Unknown config key '{key}' in {path}")
    logger.debug(f"Loaded {len(values)} key(s) from {path}")
    return values


def resolve_config(flags: Optional[Dict[str, Any]] = None, config_path=None) -> CliConfig:
    """
    Merge flags, config file and defaults into a validated CliConfig.

    Args:
        flags: Flag values by key; None means "not given"
        config_path: Config file; OCT_INPAINT['CONFIG_FILE'] when omitted

    Raises:
        ConfigError: on unknown keys or invalid values
    """
    flags = flags or {}
    unknown = [key for key in flags if key not in CliConfigSerializer().fields]
    if unknown:
        raise ConfigError(f"Unknown config key '{unknown[0]}'")

    path = config_path or settings.OCT_INPAINT.get('CONFIG_FILE') or None
    values: Dict[str, Any] = load_config_file(path) if path else {}
    values.update({key: value for key, value in flags.items() if value is not None})

    serializer = CliConfigSerializer(data=values)
    if not serializer.is_valid():
        problems = '; '.join(
            f"{key}: {' '.join(str(m) for m in messages)}" for key, messages in serializer.errors.items()
        )
        raise ConfigError(f"Invalid configuration: {problems}")
    data = serializer.validated_data

    pipeline = PipelineConfig(**{
        **{key: data[key] for key in PIPELINE_KEYS},
        'dict_full': data['dict_full'] or None,
        'dict_down': data['dict_down'] or None,
        'threads': data['threads'] or None,
    })
    preprocess = PreprocessParams(
        **{key: data[key] for key in PREPROCESS_KEYS},
        shadows=ShadowParams(**{key: data[key] for key in SHADOW_KEYS}),
    )
    return CliConfig(pipeline=pipeline, preprocess=preprocess, source=Path(path) if path else None)
