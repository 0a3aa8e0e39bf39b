"""
Persisted width-sweep reports.
"""
from django.db import models

from apps.core.models import TimeStampedModel


class SweepRun(TimeStampedModel):
    """
    One width sweep: its inputs and where the report was written.
    """
    seed = models.BigIntegerField(default=0)
    trials = models.PositiveIntegerField()
    region = models.CharField(max_length=10)
    methods = models.JSONField(default=list)
    widths = models.JSONField(default=list)
    n_images = models.PositiveIntegerField(default=0)
    config = models.JSONField(default=dict)

    # Outcome
    failures = models.PositiveIntegerField(default=0)
    execution_time_ms = models.IntegerField(default=0)
    csv_path = models.CharField(max_length=500, blank=True)

    class Meta:
        verbose_name = 'Sweep Run'
        verbose_name_plural = 'Sweep Runs'
        ordering = ['-created_at']

    def __str__(self):
        return f"Sweep seed {self.seed} ({len(self.widths)} widths, {self.trials} trials)"


class SweepResult(models.Model):
    """
    Aggregated metrics of one (method, width) cell of a sweep.
    """
    run = models.ForeignKey(SweepRun, on_delete=models.CASCADE, related_name='results')
    method = models.CharField(max_length=50)
    width = models.PositiveIntegerField()

    psnr_mean = models.FloatField()
    psnr_std = models.FloatField()
    ssim_mean = models.FloatField()
    ssim_std = models.FloatField()
    trials = models.PositiveIntegerField()

    class Meta:
        verbose_name = 'Sweep Result'
        verbose_name_plural = 'Sweep Results'
        unique_together = [['run', 'method', 'width']]
        ordering = ['method', 'width']
        indexes = [
            models.Index(fields=['method', 'width'], name='eval_result_method_width_idx'),
        ]

    def __str__(self):
        return f"{self.method} @ {self.width}px: PSNR {self.psnr_mean:.2f}, SSIM {self.ssim_mean:.3f}"
