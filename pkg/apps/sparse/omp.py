"""
Orthogonal matching pursuit, plain and with masked rows.

All coding goes through one batched routine: every signal of a batch
runs its own greedy selection while least-squares solves are vectorized
over the batch through the Gram matrix.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from django.conf import settings

from apps.core.exceptions import DimensionMismatch, IndexOutOfRange, InsufficientSupport
from .dictionary import Dictionary

logger = logging.getLogger(__name__)

MIN_SUPPORT_ROWS = 8
# Correlations at or below this are treated as an exhausted residual
CORRELATION_FLOOR = 1e-12


@dataclass(frozen=True)
class SparseCode:
    """Selected atom indices and their coefficients, in selection order."""
    indices: Tuple[int, ...]
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=np.float64, copy=True).reshape(-1)
        if len(coeffs) != len(self.indices):
            raise DimensionMismatch(f"{len(self.indices)} indices but {len(coeffs)} coefficients")
        if len(set(self.indices)) != len(self.indices):
            raise IndexOutOfRange(f"Duplicate atom indices in {self.indices}")
        coeffs.setflags(write=False)
        object.__setattr__(self, 'indices', tuple(int(i) for i in self.indices))
        object.__setattr__(self, 'coeffs', coeffs)

    def __len__(self) -> int:
        return len(self.indices)

    @classmethod
    def empty(cls) -> 'SparseCode':
        return cls((), np.zeros(0))

    def as_dict(self) -> dict:
        return dict(zip(self.indices, self.coeffs.tolist()))


def support_floor(sparsity: int) -> int:
    """Minimum number of kept rows for masked coding."""
    return max(2 * sparsity, MIN_SUPPORT_ROWS)


def _numerics() -> Tuple[float, float]:
    cfg = settings.OCT_INPAINT
    return cfg.get('OMP_TOLERANCE', 1e-9), cfg.get('LSTSQ_RIDGE', 1e-12)


def batch_omp(
    select_atoms: np.ndarray,
    fit_atoms: np.ndarray,
    signals: np.ndarray,
    sparsity: int,
    tolerance: Optional[float] = None,
    ridge: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Code every column of `signals` with at most `sparsity` atoms.

    Args:
        select_atoms: (m, M) atoms correlated against the residual
        fit_atoms: (m, M) atoms the least-squares fit and residual use
        signals: (m, n) signals, one per column
        sparsity: Maximum number of atoms per signal
        tolerance: Stop a signal once its residual norm falls below this
        ridge: Diagonal loading of the normal equations

    Returns:
        (support, coeffs), both (n, sparsity); unused slots hold index -1 and 0.0
    """
    default_tol, default_ridge = _numerics()
    tolerance = default_tol if tolerance is None else tolerance
    ridge = default_ridge if ridge is None else ridge

    signals = np.asarray(signals, dtype=np.float64)
    if signals.ndim == 1:
        signals = signals[:, None]
    m, n = signals.shape
    if select_atoms.shape != fit_atoms.shape or select_atoms.shape[0] != m:
        raise DimensionMismatch(
            f"Signals of length {m} do not match atoms {select_atoms.shape} / {fit_atoms.shape}"
        )
    if sparsity < 1:
        raise DimensionMismatch(f"Sparsity must be >= 1, got {sparsity}")

    n_atoms = fit_atoms.shape[1]
    sparsity = min(sparsity, n_atoms)
    support = np.full((n, sparsity), -1, dtype=np.intp)
    coeffs = np.zeros((n, sparsity))
    if n == 0:
        return support, coeffs

    gram = fit_atoms.T @ fit_atoms
    projections = fit_atoms.T @ signals
    residual = signals.copy()
    active = np.linalg.norm(residual, axis=0) >= tolerance

    for step in range(sparsity):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break

        correlation = np.abs(select_atoms.T @ residual[:, idx])
        # Already selected atoms cannot be picked again
        for prev in range(step):
            correlation[support[idx, prev], np.arange(idx.size)] = -1.0
        best = np.argmax(correlation, axis=0)
        strength = correlation[best, np.arange(idx.size)]

        exhausted = strength <= CORRELATION_FLOOR
        if np.any(exhausted):
            active[idx[exhausted]] = False
            idx, best = idx[~exhausted], best[~exhausted]
            if idx.size == 0:
                break

        support[idx, step] = best
        chosen = support[idx, :step + 1]
        sub_gram = gram[chosen[:, :, None], chosen[:, None, :]]
        sub_gram = sub_gram + ridge * np.eye(step + 1)[None, :, :]
        rhs = projections[chosen, idx[:, None]]
        solved = np.linalg.solve(sub_gram, rhs[:, :, None])[:, :, 0]
        coeffs[idx, :step + 1] = solved

        approx = np.einsum('mik,ik->mi', fit_atoms[:, chosen], solved)
        residual[:, idx] = signals[:, idx] - approx
        active[idx] = np.linalg.norm(residual[:, idx], axis=0) >= tolerance

    return support, coeffs


def reconstruct_batch(atoms: np.ndarray, support: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Rebuild signals as (n, atom_len) rows from batched codes."""
    if support.size == 0:
        return np.zeros((support.shape[0], atoms.shape[0]))
    used = support >= 0
    safe = np.where(used, support, 0)
    weights = np.where(used, coeffs, 0.0)
    return np.einsum('mik,ik->im', atoms[:, safe], weights)


def _to_code(support_row: np.ndarray, coeff_row: np.ndarray) -> SparseCode:
    used = support_row >= 0
    return SparseCode(tuple(support_row[used].tolist()), coeff_row[used])


def _check_signal(dictionary: Dictionary, y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.shape[0] != dictionary.atom_len:
        raise DimensionMismatch(f"Signal length {y.shape[0]} != atom length {dictionary.atom_len}")
    return y


def omp(dictionary: Dictionary, y: np.ndarray, sparsity: int) -> SparseCode:
    """
    Greedy OMP: pick the atom most correlated with the residual, refit all
    selected atoms by least squares, repeat until `sparsity` atoms are used
    or the residual vanishes.
    """
    y = _check_signal(dictionary, y)
    support, coeffs = batch_omp(dictionary.atoms, dictionary.atoms, y[:, None], sparsity)
    return _to_code(support[0], coeffs[0])


def masked_rows(dictionary: Dictionary, keep: np.ndarray, sparsity: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Atoms restricted to kept rows: (normalized for selection, raw for fitting).

    Raises:
        InsufficientSupport: fewer kept rows than the support floor
    """
    keep = np.asarray(keep, dtype=bool).reshape(-1)
    if keep.shape[0] != dictionary.atom_len:
        raise DimensionMismatch(f"Keep vector length {keep.shape[0]} != atom length {dictionary.atom_len}")
    n_kept = int(keep.sum())
    floor = support_floor(sparsity)
    if n_kept < floor:
        raise InsufficientSupport(f"Only {n_kept} kept row(s), masked coding needs {floor}")

    fit_atoms = dictionary.atoms[keep]
    norms = np.linalg.norm(fit_atoms, axis=0)
    # Atoms with no energy on the kept rows can never be selected
    select_atoms = np.divide(fit_atoms, norms, out=np.zeros_like(fit_atoms), where=norms > 0)
    return select_atoms, fit_atoms


def masked_omp_batch(
    dictionary: Dictionary,
    kept_signals: np.ndarray,
    keep: np.ndarray,
    sparsity: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Code signals that share one keep pattern.

    `kept_signals` holds only the kept rows, shape (n_kept, n). Coefficients
    refer to the unit-norm full atoms, so reconstruct_batch gives the full
    patch including masked rows.
    """
    select_atoms, fit_atoms = masked_rows(dictionary, keep, sparsity)
    return batch_omp(select_atoms, fit_atoms, kept_signals, sparsity)


def masked_omp(dictionary: Dictionary, y: np.ndarray, keep: np.ndarray, sparsity: int) -> SparseCode:
    """
    OMP over the kept rows of `y` and the dictionary.

    With every row kept this is exactly `omp`.
    """
    y = _check_signal(dictionary, y)
    keep = np.asarray(keep, dtype=bool).reshape(-1)
    if keep.shape[0] != dictionary.atom_len:
        raise DimensionMismatch(f"Keep vector length {keep.shape[0]} != atom length {dictionary.atom_len}")
    if keep.all():
        return omp(dictionary, y, sparsity)

    support, coeffs = masked_omp_batch(dictionary, y[keep][:, None], keep, sparsity)
    return _to_code(support[0], coeffs[0])


def reconstruct(dictionary: Dictionary, code: SparseCode) -> np.ndarray:
    """D @ alpha over the full atom length."""
    if len(code) == 0:
        return np.zeros(dictionary.atom_len)
    return dictionary.columns(code.indices) @ code.coeffs
