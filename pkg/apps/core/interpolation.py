"""
Row-wise linear interpolation across unreliable pixels.
"""
import numpy as np

from .exceptions import DimensionMismatch, NoReliableColumns


def interpolate_rows(data: np.ndarray, reliable: np.ndarray) -> np.ndarray:
    """
    Replace unreliable pixels by linear interpolation along their row.

    Each unreliable pixel takes the value on the line between the nearest
    reliable pixels to its left and right; past the last reliable pixel the
    nearest reliable value is held.

    Raises:
        NoReliableColumns: if a row that needs filling has no reliable pixel
    """
    data = np.asarray(data, dtype=np.float64)
    reliable = np.asarray(reliable, dtype=bool)
    if data.shape != reliable.shape:
        raise DimensionMismatch(f"Data {data.shape} and reliability map {reliable.shape} differ")

    out = data.copy()
    cols = np.arange(data.shape[1])
    for r in np.flatnonzero(~reliable.all(axis=1)):
        keep = reliable[r]
        if not keep.any():
            raise NoReliableColumns(f"Row {r} has no reliable pixel to interpolate from")
        out[r, ~keep] = np.interp(cols[~keep], cols[keep], data[r, keep])
    return out
