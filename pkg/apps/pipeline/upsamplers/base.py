"""
Base class for upsamplers used by the wide-shadow branch.
"""
import logging
from abc import ABC, abstractmethod

import numpy as np
from django.conf import settings

from apps.core.exceptions import ConfigError, UpsamplerFailed
from apps.core.image import Image

logger = logging.getLogger(__name__)


class BaseUpsampler(ABC):
    """
    Abstract base class for integer-factor image upsamplers.

    Subclasses implement `_upsample`; `upsample` handles the identity
    factor and checks the output dimensions.
    """

    # Subclasses must define this
    METHOD_NAME = None

    def __init__(self):
        if not self.METHOD_NAME:
            raise ValueError("Upsampler must define METHOD_NAME")
        self.settings = settings.OCT_INPAINT

    def upsample(self, img: Image, factor: int) -> Image:
        """
        Enlarge `img` by `factor` in both axes.

        Raises:
            UpsamplerFailed: if the result does not have exactly factor x the input dims
        """
        if factor < 1:
            raise ConfigError(f"Upsampling factor must be >= 1, got {factor}")
        if factor == 1:
            return img

        data = np.asarray(self._upsample(img.data, factor), dtype=np.float64)
        expected = (img.height * factor, img.width * factor)
        if data.shape != expected:
            raise UpsamplerFailed(
                f"{self.METHOD_NAME} upsampler returned {data.shape[1]}x{data.shape[0]}, "
                f"expected {expected[1]}x{expected[0]}"
            )
        return img.with_data(data)

    @abstractmethod
    def _upsample(self, data: np.ndarray, factor: int) -> np.ndarray:
        """
        Upsample a 2-D array of values in [0, 1].

        Args:
            data: (height, width) array
            factor: Integer scale factor > 1

        Returns:
            (height * factor, width * factor) array
        """
        pass

    def __repr__(self):
        return f"<{self.__class__.__name__} {self.METHOD_NAME}>"
