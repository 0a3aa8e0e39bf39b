"""
Tests for K-SVD dictionary learning.
"""
import numpy as np
import pytest

from apps.core.exceptions import TooFewPatches
from apps.sparse.ksvd import KSVDTrainer, train_dictionary


def synthetic_signals(rng, atom_len, n_atoms, n_signals, sparsity=2):
    generator = rng.standard_normal((atom_len, n_atoms))
    generator /= np.linalg.norm(generator, axis=0)
    signals = np.zeros((n_signals, atom_len))
    for i in range(n_signals):
        support = rng.choice(n_atoms, size=sparsity, replace=False)
        signals[i] = generator[:, support] @ rng.standard_normal(sparsity)
    return generator, signals


def recovered_fraction(generator, learned, threshold=0.95):
    correlation = np.abs(generator.T @ learned)
    return float(np.mean(correlation.max(axis=1) >= threshold))


def test_error_is_non_increasing(rng):
    _, signals = synthetic_signals(rng, 16, 32, 1500)
    trainer = KSVDTrainer(n_atoms=32, sparsity=2, iterations=30, seed=3, threads=1)
    dictionary = trainer.fit(signals)

    history = trainer.error_history_
    assert len(history) == 30
    assert all(later <= earlier + 1e-12 for earlier, later in zip(history, history[1:]))
    assert history[-1] < history[0]
    assert dictionary.n_atoms == 32
    assert np.allclose(np.linalg.norm(dictionary.atoms, axis=0), 1.0)


def test_scale_tag_is_recorded(rng):
    _, signals = synthetic_signals(rng, 16, 24, 300)
    dictionary = train_dictionary(signals, n_atoms=24, sparsity=2, iterations=1, scale_tag=4, threads=1)
    assert dictionary.scale_tag == 4


def test_deterministic_for_fixed_seed(rng):
    _, signals = synthetic_signals(rng, 16, 24, 600)
    first = train_dictionary(signals, n_atoms=24, iterations=3, seed=9, threads=2)
    second = train_dictionary(signals, n_atoms=24, iterations=3, seed=9, threads=2)
    assert first.to_bytes() == second.to_bytes()



def test_too_few_distinct_patches():
    patches = np.tile(np.arange(1, 17, dtype=float), (50, 1))
    with pytest.raises(TooFewPatches):
        KSVDTrainer(n_atoms=8, iterations=1, threads=1).fit(patches)


@pytest.mark.slow
def test_recovers_generating_dictionary():
    rng = np.random.default_rng(2024)
    generator, signals = synthetic_signals(rng, 20, 50, 4000)
    trainer = KSVDTrainer(n_atoms=50, sparsity=2, iterations=40, seed=0, threads=2)
    learned = trainer.fit(signals).atoms
    assert recovered_fraction(generator, learned) >= 0.8
