"""
Row-wise linear interpolation baseline.
"""
import numpy as np

from apps.core.exceptions import NoReliableColumns
from apps.core.image import Image, ShadowMask


def inpaint_baseline_interp(img: Image, mask: ShadowMask) -> Image:
    """
    Fill every shadowed column by linear interpolation along each row
    between the nearest reliable columns; beyond the outermost reliable
    column the edge value is held.

    Raises:
        NonColumnarMask: if the mask is not column-wise constant
        NoReliableColumns: if every column is shadowed
    """
    mask.check_pair(img)
    shadowed = mask.shadowed_columns()
    if not shadowed.any():
        return img

    reliable = np.flatnonzero(~shadowed)
    if reliable.size == 0:
        raise NoReliableColumns("Every column is shadowed")
    targets = np.flatnonzero(shadowed)

    # Bracketing reliable columns for each shadowed column
    right = np.searchsorted(reliable, targets)
    left = np.clip(right - 1, 0, reliable.size - 1)
    right = np.clip(right, 0, reliable.size - 1)
    x0, x1 = reliable[left], reliable[right]
    span = np.where(x1 == x0, 1, x1 - x0)
    t = np.where(x1 == x0, 0.0, (targets - x0) / span)

    data = img.data.copy()
    data[:, targets] = (1.0 - t) * img.data[:, x0] + t * img.data[:, x1]
    return img.with_data(data)
