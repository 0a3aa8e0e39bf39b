"""
Dictionary type and the OCTD binary file format.

Layout (little-endian): magic b"OCTD", version u16, atom_len u32,
n_atoms u32, scale_tag u32, then atom_len * n_atoms float32 values with
each atom stored contiguously.
"""
import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from apps.core.exceptions import CorruptFile, IndexOutOfRange, InvalidDictionary

logger = logging.getLogger(__name__)

MAGIC = b'OCTD'
VERSION = 1
HEADER = struct.Struct('<4sHIII')
SAMPLE_DTYPE = np.dtype('<f4')
NORM_TOLERANCE = 1e-9


def normalize_columns(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=0)
    if np.any(norms <= 0) or not np.all(np.isfinite(norms)):
        raise InvalidDictionary("Dictionary atoms must be finite and nonzero")
    return matrix / norms


@dataclass(frozen=True)
class Dictionary:
    """
    Atom matrix of shape (atom_len, n_atoms), one unit-norm atom per column.

    `scale_tag` is the pixel scale the atoms were learned at: 1 for full
    resolution, N for images downsampled by N.
    """
    atoms: np.ndarray
    scale_tag: int = 1

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=np.float64, copy=True)
        if atoms.ndim != 2 or atoms.size == 0:
            raise InvalidDictionary(f"Atoms must be a non-empty 2-D matrix, got shape {atoms.shape}")
        if self.scale_tag < 1:
            raise InvalidDictionary(f"scale_tag must be >= 1, got {self.scale_tag}")
        atoms = normalize_columns(atoms)
        atoms.setflags(write=False)
        object.__setattr__(self, 'atoms', atoms)

    @property
    def atom_len(self) -> int:
        return self.atoms.shape[0]

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[1]

    @property
    def is_overcomplete(self) -> bool:
        return self.atom_len < self.n_atoms

    def atom(self, index: int) -> np.ndarray:
        if not 0 <= index < self.n_atoms:
            raise IndexOutOfRange(f"Atom {index} outside [0, {self.n_atoms})")
        return self.atoms[:, index]

    def columns(self, indices: Sequence[int]) -> np.ndarray:
        indices = np.asarray(indices, dtype=np.intp)
        if indices.size and (indices.min() < 0 or indices.max() >= self.n_atoms):
            raise IndexOutOfRange(f"Atom indices {indices.tolist()} outside [0, {self.n_atoms})")
        return self.atoms[:, indices]

    def to_bytes(self) -> bytes:
        header = HEADER.pack(MAGIC, VERSION, self.atom_len, self.n_atoms, self.scale_tag)
        # Transpose so each atom is contiguous
        body = np.ascontiguousarray(self.atoms.T, dtype=SAMPLE_DTYPE).tobytes()
        return header + body

    @classmethod
    def from_bytes(cls, payload: bytes, source: str = '<bytes>') -> 'Dictionary':
        if len(payload) < HEADER.size:
            raise CorruptFile(f"{source}: truncated dictionary header")
        magic, version, atom_len, n_atoms, scale_tag = HEADER.unpack_from(payload)
        if magic != MAGIC:
            raise CorruptFile(f"{source}: bad magic {magic!r}, expected {MAGIC!r}")
        if version != VERSION:
            raise CorruptFile(f"{source}: unsupported dictionary version {version}")

        expected = atom_len * n_atoms * SAMPLE_DTYPE.itemsize
        body = payload[HEADER.size:]
        if len(body) != expected:
            raise CorruptFile(f"{source}: expected {expected} bytes of atoms, found {len(body)}")

        samples = np.frombuffer(body, dtype=SAMPLE_DTYPE).astype(np.float64)
        try:
            return cls(samples.reshape(n_atoms, atom_len).T, scale_tag=scale_tag)
        except InvalidDictionary as e:
            raise CorruptFile(f"{source}: {e}") from e

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.to_bytes())
        logger.info(f"Wrote dictionary {self.atom_len}x{self.n_atoms} (scale {self.scale_tag}) to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'Dictionary':
        path = Path(path)
        try:
            payload = path.read_bytes()
        except OSError as e:
            raise CorruptFile(f"Could not read dictionary {path}: {e}") from e
        dictionary = cls.from_bytes(payload, source=str(path))
        logger.debug(f"Loaded dictionary {dictionary.atom_len}x{dictionary.n_atoms} from {path}")
        return dictionary


def load_dictionary(path: Union[str, Path]) -> Dictionary:
    return Dictionary.load(path)


def save_dictionary(dictionary: Dictionary, path: Union[str, Path]) -> Path:
    return dictionary.save(path)
