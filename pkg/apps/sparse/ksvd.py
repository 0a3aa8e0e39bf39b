"""
K-SVD dictionary learning.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from django.conf import settings
from scipy import linalg

from apps.core.constants import DEFAULT_N_ATOMS, DEFAULT_SPARSITY
from apps.core.exceptions import DimensionMismatch, TooFewPatches
from apps.core.utils import chunk_ranges, make_rng, resolve_threads
from .dictionary import Dictionary
from .omp import batch_omp, reconstruct_batch

logger = logging.getLogger(__name__)


class KSVDTrainer:
    """
    Learns an overcomplete dictionary by alternating sparse coding and
    per-atom rank-1 SVD updates.

    Each patch keeps the better of its fresh OMP code and its previous
    code, so the mean representation error never increases between
    iterations. Atoms no patch uses are replaced by the worst-represented
    patches.
    """

    def __init__(
        self,
        n_atoms: int = DEFAULT_N_ATOMS,
        sparsity: int = DEFAULT_SPARSITY,
        iterations: Optional[int] = None,
        seed: int = 0,
        threads: Optional[int] = None,
        chunk_size: Optional[int] = None,
    ):
        self.settings = settings.OCT_INPAINT
        self.n_atoms = n_atoms
        self.sparsity = sparsity
        self.iterations = self.settings.get('KSVD_ITERATIONS', 20) if iterations is None else iterations
        self.seed = seed
        self.threads = resolve_threads(threads)
        self.chunk_size = chunk_size or self.settings.get('CODING_CHUNK_SIZE', 8192)
        self.error_history_: List[float] = []

    def fit(self, patches: np.ndarray, scale_tag: int = 1) -> Dictionary:
        """
        Train on patch vectors.

        Args:
            patches: (n_patches, atom_len) matrix, one vectorized patch per row
            scale_tag: Pixel scale recorded in the returned dictionary

        Returns:
            Dictionary with n_atoms unit-norm atoms

        Raises:
            TooFewPatches: fewer distinct nonzero patches than atoms
        """
        patches = np.asarray(patches, dtype=np.float64)
        if patches.ndim != 2:
            raise DimensionMismatch(f"Training patches must be a 2-D matrix, got shape {patches.shape}")
        signals = patches.T
        atom_len, n_patches = signals.shape

        atoms = self._initial_atoms(signals)
        support, coeffs = self._code(atoms, signals)
        residual = signals - reconstruct_batch(atoms, support, coeffs).T
        self.error_history_ = []

        for iteration in range(self.iterations):
            if iteration > 0:
                support, coeffs, residual = self._recode(atoms, signals, support, coeffs, residual)
            atoms, coeffs, residual = self._update_atoms(atoms, support, coeffs, residual)
            atoms = self._replace_unused(atoms, signals, support, residual)

            error = float(np.mean(residual ** 2))
            self.error_history_.append(error)
            logger.debug(f"K-SVD iteration {iteration + 1}/{self.iterations}: mean squared error {error:.6g}")

        if self.iterations == 0:
            self.error_history_.append(float(np.mean(residual ** 2)))

        logger.info(
            f"Trained {atom_len}x{self.n_atoms} dictionary on {n_patches} patches, "
            f"final error {self.error_history_[-1]:.6g}"
        )
        return Dictionary(atoms, scale_tag=scale_tag)

    def _initial_atoms(self, signals: np.ndarray) -> np.ndarray:
        """Seeded pick of n_atoms distinct nonzero training patches, normalized."""
        norms = np.linalg.norm(signals, axis=0)
        candidates = np.flatnonzero(norms > 0)
        _, first = np.unique(signals[:, candidates].T, axis=0, return_index=True)
        distinct = candidates[np.sort(first)]
        if distinct.size < self.n_atoms:
            raise TooFewPatches(
                f"Need at least {self.n_atoms} distinct training patches, got {distinct.size} "
                f"({signals.shape[1]} total)"
            )
        chosen = make_rng(self.seed).choice(distinct, size=self.n_atoms, replace=False)
        return signals[:, chosen] / norms[chosen]

    def _code(self, atoms: np.ndarray, signals: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Chunked OMP of every training signal, chunks spread over a thread pool."""
        n_patches = signals.shape[1]
        chunks = chunk_ranges(n_patches, self.chunk_size)

        def code_chunk(chunk: range):
            return batch_omp(atoms, atoms, signals[:, chunk.start:chunk.stop], self.sparsity)

        if self.threads > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as executor:
                results = list(executor.map(code_chunk, chunks))
        else:
            results = [code_chunk(chunk) for chunk in chunks]

        support = np.concatenate([r[0] for r in results], axis=0)
        coeffs = np.concatenate([r[1] for r in results], axis=0)
        return support, coeffs

    def _recode(self, atoms, signals, support, coeffs, residual):
        new_support, new_coeffs = self._code(atoms, signals)
        new_residual = signals - reconstruct_batch(atoms, new_support, new_coeffs).T

        improved = np.sum(new_residual ** 2, axis=0) <= np.sum(residual ** 2, axis=0)
        support = np.where(improved[:, None], new_support, support)
        coeffs = np.where(improved[:, None], new_coeffs, coeffs)
        residual = np.where(improved[None, :], new_residual, residual)
        return support, coeffs, residual

    def _update_atoms(self, atoms, support, coeffs, residual):
        atoms = atoms.copy()
        coeffs = coeffs.copy()
        for k in range(atoms.shape[1]):
            users, slots = np.nonzero(support == k)
            if users.size == 0:
                continue
            # Error without atom k's contribution, restricted to its users
            contribution = np.outer(atoms[:, k], coeffs[users, slots])
            error = residual[:, users] + contribution
            u, s, vt = linalg.svd(error, full_matrices=False)
            atom, weights = u[:, 0], s[0] * vt[0]
            # Keep the orientation of the previous atom
            if atom @ atoms[:, k] < 0:
                atom, weights = -atom, -weights
            atoms[:, k] = atom
            coeffs[users, slots] = weights
            residual[:, users] = error - np.outer(atoms[:, k], coeffs[users, slots])
        return atoms, coeffs, residual

    def _replace_unused(self, atoms, signals, support, residual):
        used = np.zeros(atoms.shape[1], dtype=bool)
        used[support[support >= 0]] = True
        unused = np.flatnonzero(~used)
        if unused.size == 0:
            return atoms

        errors = np.sum(residual ** 2, axis=0)
        norms = np.linalg.norm(signals, axis=0)
        order = [p for p in np.argsort(-errors, kind='stable') if norms[p] > 0]
        atoms = atoms.copy()
        for k, patch in zip(unused, order):
            atoms[:, k] = signals[:, patch] / norms[patch]
        logger.debug(f"Replaced {min(unused.size, len(order))} unused atom(s)")
        return atoms


def train_dictionary(
    patches: np.ndarray,
    n_atoms: int = DEFAULT_N_ATOMS,
    sparsity: int = DEFAULT_SPARSITY,
    iterations: Optional[int] = None,
    seed: int = 0,
    scale_tag: int = 1,
    threads: Optional[int] = None,
) -> Dictionary:
    trainer = KSVDTrainer(n_atoms=n_atoms, sparsity=sparsity, iterations=iterations, seed=seed, threads=threads)
    return trainer.fit(patches, scale_tag=scale_tag)
