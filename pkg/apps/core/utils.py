"""
Utility functions shared across the inpainting apps.
"""
import hashlib
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional

import numpy as np
from django.conf import settings


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """
    Seeded generator for a sub-stream identified by `keys`.

    Streams with different keys are independent; identical (seed, keys)
    always reproduce the same draws.
    """
    return np.random.default_rng([int(seed), *[int(k) for k in keys]])


def resolve_threads(threads: Optional[int] = None) -> int:
    """Worker count: explicit value, else OCT_INPAINT['THREADS'], at least 1."""
    if threads is None or threads <= 0:
        threads = settings.OCT_INPAINT.get('THREADS', 1)
    return max(1, int(threads))


def chunk_ranges(total: int, size: int) -> List[range]:
    """Split range(total) into consecutive ranges of at most `size` items."""
    size = max(1, int(size))
    return [range(start, min(start + size, total)) for start in range(0, total, size)]


class Stopwatch:
    """Wall-clock timer reporting elapsed milliseconds."""

    def __init__(self):
        self.start = time.time()
        self.elapsed_ms = 0

    def stop(self) -> int:
        self.elapsed_ms = int((time.time() - self.start) * 1000)
        return self.elapsed_ms


@contextmanager
def timed() -> Iterator[Stopwatch]:
    watch = Stopwatch()
    try:
        yield watch
    finally:
        watch.stop()


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as fh:
        for block in iter(lambda: fh.read(1 << 20), b''):
            digest.update(block)
    return digest.hexdigest()
