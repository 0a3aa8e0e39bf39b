"""
Width-sweep experiment harness.

For every shadow width, synthetic shadows of exactly that width are placed
on the evaluation images, each method inpaints them, and PSNR/SSIM are
aggregated per (method, width) into a SweepReport.
"""
import csv
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from django.conf import settings

from apps.core.constants import (
    METHOD_BASELINE,
    METHOD_NO_MULTISCALE,
    METHOD_PROPOSED,
    REGION_FULL,
    REGION_MASKED,
    SWEEP_METHODS,
)
from apps.core.exceptions import ConfigError, InpaintingError
from apps.core.image import Image, ShadowMask
from apps.core.utils import resolve_threads, timed
from apps.pipeline.config import PipelineConfig
from apps.pipeline.service import ShadowRemovalService
from apps.pipeline.training import DictionaryTrainingService
from apps.preproc.services import PreprocessParams
from apps.sparse.dictionary import Dictionary
from .baseline import inpaint_baseline_interp
from .metrics import psnr, ssim
from .models import SweepResult, SweepRun
from .phantom import phantom_corpus
from .synth import max_shadows, synth_shadows

logger = logging.getLogger(__name__)

CSV_HEADER = ['method', 'width', 'psnr_mean', 'psnr_std', 'ssim_mean', 'ssim_std', 'trials', 'seed']

Inpainter = Callable[[Image, ShadowMask], Image]


@dataclass(frozen=True)
class TrialOutcome:
    method: str
    width: int
    trial: int
    psnr: float
    ssim: float
    elapsed_ms: int


@dataclass(frozen=True)
class TrialFailure:
    method: str
    width: int
    trial: int
    error: str


@dataclass(frozen=True)
class SweepCell:
    method: str
    width: int
    psnr_mean: float
    psnr_std: float
    ssim_mean: float
    ssim_std: float
    trials: int


@dataclass
class SweepReport:
    """
    Aggregated sweep results.

    Cells are ordered by method (in the order requested) then width. A cell
    exists only if at least one of its trials succeeded; standard deviations
    are population values, so a single trial has std 0.
    """
    cells: List[SweepCell]
    seed: int
    region: str
    trials: int
    outcomes: List[TrialOutcome] = field(default_factory=list)
    failures: List[TrialFailure] = field(default_factory=list)
    execution_time_ms: int = 0

    @property
    def methods(self) -> List[str]:
        return list(dict.fromkeys(cell.method for cell in self.cells))

    @property
    def widths(self) -> List[int]:
        return sorted({cell.width for cell in self.cells})

    def rows(self, method: str) -> List[SweepCell]:
        return [cell for cell in self.cells if cell.method == method]

    def cell(self, method: str, width: int) -> Optional[SweepCell]:
        for cell in self.cells:
            if cell.method == method and cell.width == width:
                return cell
        return None

    def psnr_drop(self, method: str, narrow: int, wide: int) -> Optional[float]:
        """Mean PSNR lost between two widths, or None if either cell is missing."""
        low, high = self.cell(method, narrow), self.cell(method, wide)
        if low is None or high is None:
            return None
        return low.psnr_mean - high.psnr_mean

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write the report as CSV (timings are not included)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='') as fh:
            writer = csv.writer(fh, lineterminator='\n')
            writer.writerow(CSV_HEADER)
            for cell in self.cells:
                writer.writerow([
                    cell.method,
                    cell.width,
                    f"{cell.psnr_mean:.6f}",
                    f"{cell.psnr_std:.6f}",
                    f"{cell.ssim_mean:.6f}",
                    f"{cell.ssim_std:.6f}",
                    cell.trials,
                    self.seed,
                ])
        logger.info(f"Wrote sweep report ({len(self.cells)} rows) to {path}")
        return path


def _method_inpainters(
    methods: Sequence[str],
    cfg: PipelineConfig,
    dict_full: Dictionary,
    dict_down: Optional[Dictionary],
    preprocess: Optional[PreprocessParams],
) -> Dict[str, Inpainter]:
    """Build one inpainting callable per method; services are shared by all trials."""
    inpainters = {}
    for method in methods:
        if method == METHOD_PROPOSED:
            service = ShadowRemovalService(cfg, dict_full, dict_down, preprocess=preprocess, record=False)
        elif method == METHOD_NO_MULTISCALE:
            service = ShadowRemovalService(
                cfg.evolve(multiscale=False), dict_full, None, preprocess=preprocess, record=False,
            )
        else:
            inpainters[method] = inpaint_baseline_interp
            continue
        inpainters[method] = lambda img, mask, service=service: service.remove_shadows(img, mask).image
    return inpainters


def _aggregate(method: str, width: int, outcomes: List[TrialOutcome]) -> SweepCell:
    psnrs = np.array([o.psnr for o in outcomes])
    ssims = np.array([o.ssim for o in outcomes])
    return SweepCell(
        method=method,
        width=width,
        psnr_mean=float(psnrs.mean()),
        psnr_std=float(psnrs.std()) if np.isfinite(psnrs).all() else 0.0,
        ssim_mean=float(ssims.mean()),
        ssim_std=float(ssims.std()),
        trials=len(outcomes),
    )


def width_sweep(
    images: Sequence[Image],
    widths: Sequence[int],
    methods: Sequence[str],
    trials: int,
    seed: int,
    cfg: PipelineConfig,
    dict_full: Dictionary,
    dict_down: Optional[Dictionary] = None,
    region: str = REGION_MASKED,
    shadows_per_image: Optional[int] = None,
    threads: Optional[int] = None,
    preprocess: Optional[PreprocessParams] = None,
) -> SweepReport:
    """
    Run every method on synthetic shadows of each width.

    Trial t of width w uses image t mod len(images) and the placement seed
    (seed, w, t), so all methods see the same corrupted inputs and the
    report is reproducible for a fixed seed.

    Args:
        images: Clean evaluation images
        widths: Shadow widths in pixels
        methods: Subset of SWEEP_METHODS
        trials: Trials per width
        seed: Placement seed
        cfg: Pipeline configuration for the sparse methods
        dict_full, dict_down: Dictionaries for the sparse methods
        region: 'masked' (shadowed pixels only) or 'full' (whole image)
        shadows_per_image: Shadows placed per trial, capped at what fits
        threads: Parallel trials; settings default when omitted

    Returns:
        SweepReport; failed trials are listed in report.failures

    Raises:
        ConfigError: on unknown methods, an invalid region, or widths out of range
    """
    unknown = [m for m in methods if m not in SWEEP_METHODS]
    if unknown:
        raise ConfigError(f"Unknown sweep method(s): {', '.join(unknown)}")
    if region not in (REGION_MASKED, REGION_FULL):
        raise ConfigError(f"Region must be '{REGION_MASKED}' or '{REGION_FULL}', got '{region}'")
    if not images:
        raise ConfigError("Sweep needs at least one image")
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    bad = [w for w in widths if w < 1 or w > cfg.max_expected_width]
    if bad:
        raise ConfigError(f"Width(s) {bad} outside [1, max_expected_width={cfg.max_expected_width}]")

    if shadows_per_image is None:
        shadows_per_image = settings.OCT_INPAINT.get('SHADOWS_PER_IMAGE', 3)

    # Trials run in parallel, so each one codes single-threaded
    inner_cfg = cfg.evolve(threads=1)
    inpainters = _method_inpainters(methods, inner_cfg, dict_full, dict_down, preprocess)

    def run_trial(width: int, trial: int) -> Tuple[List[TrialOutcome], List[TrialFailure]]:
        reference = images[trial % len(images)]
        count = min(shadows_per_image, max_shadows(reference.width, width, cfg.context_margin))
        corrupted, mask = synth_shadows(
            reference, count, (width, width), seed=[seed, width, trial], margin=cfg.context_margin,
        )
        scored_region = mask if region == REGION_MASKED else None

        outcomes, failures = [], []
        for method in methods:
            try:
                with timed() as watch:
                    output = inpainters[method](corrupted, mask)
                outcomes.append(TrialOutcome(
                    method, width, trial,
                    psnr(reference, output, scored_region),
                    ssim(reference, output, scored_region),
                    watch.elapsed_ms,
                ))
            except InpaintingError as e:
                logger.warning(f"Sweep trial failed: {method} width {width} trial {trial}: {e}")
                failures.append(TrialFailure(method, width, trial, str(e)))
        return outcomes, failures

    jobs = [(w, t) for w in widths for t in range(trials)]
    results: Dict[Tuple[int, int], Tuple[List[TrialOutcome], List[TrialFailure]]] = {}
    workers = min(resolve_threads(threads if threads is not None else cfg.threads), len(jobs))

    with timed() as watch:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                future_to_job = {executor.submit(run_trial, w, t): (w, t) for w, t in jobs}

                # Collect results
                for future in as_completed(future_to_job):
                    results[future_to_job[future]] = future.result()
        else:
            for w, t in jobs:
                results[(w, t)] = run_trial(w, t)

    # Single-writer assembly in job order
    outcomes = [o for job in jobs for o in results[job][0]]
    failures = [f for job in jobs for f in results[job][1]]
    cells = []
    for method in methods:
        for width in widths:
            cell_outcomes = [o for o in outcomes if o.method == method and o.width == width]
            if not cell_outcomes:
                logger.warning(f"No successful trial for {method} at width {width}; cell omitted")
                continue
            cells.append(_aggregate(method, width, cell_outcomes))

    logger.info(
        f"Sweep finished: {len(widths)} width(s) x {trials} trial(s) x {len(methods)} method(s), "
        f"{len(failures)} failure(s), {watch.elapsed_ms}ms"
    )
    return SweepReport(
        cells=cells,
        seed=seed,
        region=region,
        trials=trials,
        outcomes=outcomes,
        failures=failures,
        execution_time_ms=watch.elapsed_ms,
    )


def summarize(report: SweepReport) -> Dict[str, Dict[str, float]]:
    """
    Per-method mean and standard deviation of PSNR and SSIM over every
    successful trial, plus the mean inpainting time per trial.
    """
    summary = {}
    for method in dict.fromkeys(o.method for o in report.outcomes):
        outcomes = [o for o in report.outcomes if o.method == method]
        psnrs = np.array([o.psnr for o in outcomes])
        ssims = np.array([o.ssim for o in outcomes])
        summary[method] = {
            'psnr_mean': float(psnrs.mean()),
            'psnr_std': float(psnrs.std()) if np.isfinite(psnrs).all() else 0.0,
            'ssim_mean': float(ssims.mean()),
            'ssim_std': float(ssims.std()),
            'time_ms_mean': float(np.mean([o.elapsed_ms for o in outcomes])),
            'samples': len(outcomes),
        }
    return summary


def format_summary(summary: Dict[str, Dict[str, float]], label: str = 'phantom corpus') -> str:
    lines = [
        f"Summary ({label})",
        f"{'method':<24} {'PSNR (dB)':>18} {'SSIM':>16} {'time/trial':>12} {'n':>6}",
    ]
    for method, row in summary.items():
        lines.append(
            f"{method:<24} "
            f"{row['psnr_mean']:>9.2f} ± {row['psnr_std']:<6.2f} "
            f"{row['ssim_mean']:>7.3f} ± {row['ssim_std']:<6.3f} "
            f"{row['time_ms_mean']:>10.0f}ms "
            f"{row['samples']:>6d}"
        )
    return '\n'.join(lines)


def plot_report(report: SweepReport, path: Union[str, Path], title: str = '') -> Path:
    """PSNR and SSIM versus shadow width, one line per method, as PNG."""
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, (ax_psnr, ax_ssim) = plt.subplots(1, 2, figsize=(11, 4.5))
    for method in report.methods:
        rows = report.rows(method)
        widths = [c.width for c in rows]
        ax_psnr.errorbar(widths, [c.psnr_mean for c in rows], yerr=[c.psnr_std for c in rows],
                         marker='o', capsize=3, label=method)
        ax_ssim.errorbar(widths, [c.ssim_mean for c in rows], yerr=[c.ssim_std for c in rows],
                         marker='o', capsize=3, label=method)

    region = 'shadowed pixels' if report.region == REGION_MASKED else 'full image'
    ax_psnr.set_xlabel('Shadow width (px)')
    ax_psnr.set_ylabel(f'PSNR (dB), {region}')
    ax_ssim.set_xlabel('Shadow width (px)')
    ax_ssim.set_ylabel(f'SSIM, {region}')
    for ax in (ax_psnr, ax_ssim):
        ax.grid(alpha=0.3)
        ax.legend()
    if title:
        fig.suptitle(title)
    plt.tight_layout()
    fig.savefig(str(path), dpi=120)
    plt.close(fig)
    logger.info(f"Wrote sweep plot to {path}")
    return path


def train_default_dictionaries(
    cfg: PipelineConfig,
    seed: int = 0,
    count: int = 4,
    size: Optional[Tuple[int, int]] = None,
    iterations: Optional[int] = None,
) -> Tuple[Dictionary, Optional[Dictionary]]:
    """
    Train full-resolution and downsampled dictionaries on a phantom corpus
    seeded independently of the evaluation images (seed + 1).
    """
    size = size or tuple(settings.OCT_INPAINT.get('PHANTOM_SIZE', (256, 256)))
    corpus = phantom_corpus(count, size, seed=seed + 1)
    trainer = DictionaryTrainingService(cfg, record=False)
    dict_full = trainer.train(corpus, scale=1, seed=seed, iterations=iterations).dictionary
    dict_down = None
    if cfg.multiscale:
        dict_down = trainer.train(
            corpus, scale=cfg.downsample_factor, seed=seed, iterations=iterations,
        ).dictionary
    logger.info(f"Trained default dictionaries on {count} phantom(s) of {size[0]}x{size[1]}")
    return dict_full, dict_down


def record_report(
    report: SweepReport,
    cfg: PipelineConfig,
    n_images: int,
    csv_path: Union[str, Path, None] = None,
) -> Optional[SweepRun]:
    """Log sweep report to database."""
    try:
        run = SweepRun.objects.create(
            seed=report.seed,
            trials=report.trials,
            region=report.region,
            methods=report.methods,
            widths=report.widths,
            n_images=n_images,
            config=cfg.as_dict(),
            failures=len(report.failures),
            execution_time_ms=report.execution_time_ms,
            csv_path=str(csv_path or ''),
        )
        SweepResult.objects.bulk_create([
            SweepResult(
                run=run,
                method=cell.method,
                width=cell.width,
                psnr_mean=cell.psnr_mean,
                psnr_std=cell.psnr_std,
                ssim_mean=cell.ssim_mean,
                ssim_std=cell.ssim_std,
                trials=cell.trials,
            )
            for cell in report.cells
        ])
        return run
    except Exception as e:
        logger.error(f"Failed to log sweep run: {e}")
        return None
