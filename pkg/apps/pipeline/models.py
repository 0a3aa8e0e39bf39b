"""
Run history for inpainting runs.
"""
from django.db import models

from apps.core.models import RunStatus, TimeStampedModel


class InpaintLog(TimeStampedModel):
    """
    Log of inpainting runs for monitoring and timing.
    """
    source = models.CharField(max_length=500, blank=True)
    width = models.PositiveIntegerField()
    height = models.PositiveIntegerField()

    # Routing
    shadowed_columns = models.PositiveIntegerField(default=0)
    narrow_shadows = models.PositiveIntegerField(default=0)
    wide_shadows = models.PositiveIntegerField(default=0)

    # Coding diagnostics
    coded_patches = models.PositiveIntegerField(default=0)
    fallback_patches = models.PositiveIntegerField(default=0)
    regularized_patches = models.PositiveIntegerField(default=0)

    # Settings
    upsampler = models.CharField(max_length=20, blank=True)
    multiscale = models.BooleanField(default=True)
    config = models.JSONField(default=dict)

    # Outcome
    status = models.CharField(max_length=10, choices=RunStatus.choices, default=RunStatus.SUCCESS)
    execution_time_ms = models.IntegerField(default=0)
    error_message = models.TextField(blank=True)

    class Meta:
        verbose_name = 'Inpaint Log'
        verbose_name_plural = 'Inpaint Logs'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['status', 'created_at'], name='pipeline_log_status_idx'),
        ]

    def __str__(self):
        return f"{self.source or 'image'} {self.width}x{self.height} - {self.status} ({self.execution_time_ms}ms)"
