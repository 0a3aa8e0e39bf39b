"""
Dictionary training from an image corpus.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
from django.conf import settings

from apps.core.exceptions import InpaintingError, RegionTooSmall
from apps.core.image import Image
from apps.core.io import load_corpus
from apps.core.patches import window_variance
from apps.core.utils import file_sha256, make_rng, timed
from apps.preproc.services import PreprocessParams, Preprocessor
from apps.sparse.dictionary import Dictionary
from apps.sparse.ksvd import KSVDTrainer
from apps.sparse.models import DictionaryRecord
from .config import PipelineConfig
from .resampling import downsample

logger = logging.getLogger(__name__)


@dataclass
class TrainingResult:
    dictionary: Dictionary
    n_images: int
    n_patches: int
    error_history: List[float] = field(default_factory=list)
    training_time_ms: int = 0
    path: Optional[Path] = None

    @property
    def final_error(self) -> float:
        return self.error_history[-1] if self.error_history else float('nan')


class DictionaryTrainingService:
    """
    Samples informative patches from a corpus and learns a dictionary at
    full resolution or at a downsampled scale.
    """

    def __init__(
        self,
        cfg: PipelineConfig,
        preprocess: Optional[PreprocessParams] = None,
        record: Optional[bool] = None,
    ):
        self.settings = settings.OCT_INPAINT
        self.cfg = cfg
        self.preprocessor = Preprocessor(preprocess)
        self.patch_budget = self.settings.get('PATCH_BUDGET_PER_IMAGE', 10000)
        self.variance_floor = self.settings.get('PATCH_VARIANCE_FLOOR', 1e-4)
        self.record = self.settings.get('RECORD_RUNS', False) if record is None else record

    def prepare(self, img: Image, scale: int, flatten: bool) -> Image:
        if flatten:
            try:
                img = self.preprocessor.flatten_only(img)
            except InpaintingError as e:
                logger.warning(f"Could not flatten training image, using it as is: {e}")
        return downsample(img, scale)

    def sample_patches(self, img: Image, rng: np.random.Generator) -> np.ndarray:
        """
        Up to `patch_budget` patches of one image, skipping near-constant
        (background) patches.
        """
        pw, ph = self.cfg.patch_w, self.cfg.patch_h
        variance = window_variance(img.data, pw, ph)
        candidates = np.flatnonzero(variance >= self.variance_floor)
        if candidates.size > self.patch_budget:
            candidates = np.sort(rng.choice(candidates, size=self.patch_budget, replace=False))

        ys, xs = np.divmod(candidates, variance.shape[1])
        windows = np.lib.stride_tricks.sliding_window_view(img.data, (ph, pw))
        return windows[ys, xs].reshape(len(candidates), pw * ph)

    def collect(self, images: Sequence[Image], scale: int = 1, seed: int = 0, flatten: bool = True) -> np.ndarray:
        batches = []
        for index, img in enumerate(images):
            prepared = self.prepare(img, scale, flatten)
            try:
                batches.append(self.sample_patches(prepared, make_rng(seed, index)))
            except RegionTooSmall as e:
                logger.warning(f"Skipping training image {index}: {e}")
        if not batches:
            return np.empty((0, self.cfg.atom_len))
        patches = np.concatenate(batches, axis=0)
        logger.info(f"Sampled {len(patches)} training patches from {len(images)} image(s) at scale {scale}")
        return patches

    def train(
        self,
        images: Sequence[Image],
        scale: int = 1,
        seed: int = 0,
        iterations: Optional[int] = None,
        flatten: bool = True,
    ) -> TrainingResult:
        """
        Train a dictionary on in-memory images.

        Raises:
            TooFewPatches: if the corpus yields fewer usable patches than atoms
        """
        patches = self.collect(images, scale=scale, seed=seed, flatten=flatten)
        trainer = KSVDTrainer(
            n_atoms=self.cfg.n_atoms,
            sparsity=self.cfg.sparsity,
            iterations=iterations,
            seed=seed,
            threads=self.cfg.threads,
        )
        with timed() as watch:
            dictionary = trainer.fit(patches, scale_tag=scale)
        return TrainingResult(
            dictionary=dictionary,
            n_images=len(images),
            n_patches=len(patches),
            error_history=list(trainer.error_history_),
            training_time_ms=watch.elapsed_ms,
        )

    def train_to_file(
        self,
        corpus: Union[str, Path],
        out_path: Union[str, Path],
        scale: int = 1,
        seed: int = 0,
        iterations: Optional[int] = None,
        flatten: bool = True,
    ) -> TrainingResult:
        """Train on every image of a corpus directory and write an OCTD file."""
        images = load_corpus(corpus)
        result = self.train(images, scale=scale, seed=seed, iterations=iterations, flatten=flatten)
        result.path = result.dictionary.save(out_path)
        self._log_training(result, corpus, seed, iterations)
        return result

    def _log_training(self, result: TrainingResult, corpus, seed: int, iterations: Optional[int]):
        """Log trained dictionary to database."""
        if not self.record:
            return
        try:
            DictionaryRecord.objects.create(
                path=str(result.path),
                sha256=file_sha256(result.path),
                scale_tag=result.dictionary.scale_tag,
                atom_len=result.dictionary.atom_len,
                n_atoms=result.dictionary.n_atoms,
                sparsity=self.cfg.sparsity,
                iterations=len(result.error_history) if iterations is None else iterations,
                seed=seed,
                corpus=str(corpus),
                n_images=result.n_images,
                n_patches=result.n_patches,
                final_error=result.final_error,
                error_history=result.error_history,
                training_time_ms=result.training_time_ms,
            )
        except Exception as e:
            logger.error(f"Failed to log dictionary training: {e}")
