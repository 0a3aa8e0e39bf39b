"""
Exception hierarchy for OCT shadow inpainting.

Every error carries the exit code the command layer reports for it
(2 = IO, 3 = config/data, 4 = algorithm).
"""
from .constants import EXIT_ALGORITHM, EXIT_CONFIG, EXIT_IO


class InpaintingError(Exception):
    """Base class for all library errors."""
    exit_code = EXIT_ALGORITHM


# IO errors

class ImageIOError(InpaintingError):
    exit_code = EXIT_IO


class UnsupportedFormat(ImageIOError):
    pass


class CorruptFile(ImageIOError):
    pass


class CorpusError(ImageIOError):
    """Training corpus missing, empty or unreadable."""


# Config / data errors

class ConfigError(InpaintingError):
    exit_code = EXIT_CONFIG


class TooFewPatches(InpaintingError):
    exit_code = EXIT_CONFIG


class InsufficientData(InpaintingError):
    exit_code = EXIT_CONFIG


class PlacementInfeasible(InpaintingError):
    exit_code = EXIT_CONFIG


# Algorithm errors

class InvalidImage(InpaintingError):
    pass


class InvalidDictionary(InpaintingError):
    pass


class RegionTooSmall(InpaintingError):
    pass


class RegionOutOfBounds(InpaintingError):
    pass


class CoverageGap(InpaintingError):
    pass


class DimensionMismatch(InpaintingError):
    pass


class InsufficientSupport(InpaintingError):
    pass


class IndexOutOfRange(InpaintingError):
    pass


class NonColumnarMask(InpaintingError):
    pass


class UpsamplerFailed(InpaintingError):
    pass


class NoReliableColumns(InpaintingError):
    pass


class EmptyRegion(InpaintingError):
    pass
