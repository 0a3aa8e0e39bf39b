"""
Run history for trained dictionaries.
"""
from django.db import models

from apps.core.models import TimeStampedModel


class DictionaryRecord(TimeStampedModel):
    """
    One trained dictionary file and the settings it was trained with.
    """
    path = models.CharField(max_length=500)
    sha256 = models.CharField(max_length=64, db_index=True)

    # Geometry
    scale_tag = models.PositiveIntegerField(default=1)
    atom_len = models.PositiveIntegerField()
    n_atoms = models.PositiveIntegerField()

    # Training parameters
    sparsity = models.PositiveIntegerField()
    iterations = models.PositiveIntegerField()
    seed = models.BigIntegerField(default=0)
    corpus = models.CharField(max_length=500, blank=True)
    n_images = models.PositiveIntegerField(default=0)
    n_patches = models.PositiveIntegerField(default=0)

    # Outcome
    final_error = models.FloatField(null=True, blank=True)
    error_history = models.JSONField(default=list)
    training_time_ms = models.IntegerField(default=0)

    class Meta:
        verbose_name = 'Dictionary Record'
        verbose_name_plural = 'Dictionary Records'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['scale_tag', 'created_at'], name='sparse_dict_scale_created_idx'),
        ]

    def __str__(self):
        return f"{self.atom_len}x{self.n_atoms} scale {self.scale_tag} - {self.path}"
