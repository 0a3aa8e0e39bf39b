# Generated by Django 5.0.1 on 2026-10-17 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="SweepRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True, db_index=True)),
                ("updated_at", models.DateTimeField(auto_now=True)),
                ("seed", models.BigIntegerField(default=0)),
                ("trials", models.PositiveIntegerField()),
                ("region", models.CharField(max_length=10)),
                ("methods", models.JSONField(default=list)),
                ("widths", models.JSONField(default=list)),
                ("n_images", models.PositiveIntegerField(default=0)),
                ("config", models.JSONField(default=dict)),
                ("failures", models.PositiveIntegerField(default=0)),
                ("execution_time_ms", models.IntegerField(default=0)),
                ("csv_path", models.CharField(blank=True, max_length=500)),
            ],
            options={
                "verbose_name": "Sweep Run",
                "verbose_name_plural": "Sweep Runs",
                "ordering": ["-created_at"],
            },
        ),
        migrations.CreateModel(
            name="SweepResult",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("method", models.CharField(max_length=50)),
                ("width", models.PositiveIntegerField()),
                ("psnr_mean", models.FloatField()),
                ("psnr_std", models.FloatField()),
                ("ssim_mean", models.FloatField()),
                ("ssim_std", models.FloatField()),
                ("trials", models.PositiveIntegerField()),
                (
                    "run",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="results",
                        to="evaluation.sweeprun",
                    ),
                ),
            ],
            options={
                "verbose_name": "Sweep Result",
                "verbose_name_plural": "Sweep Results",
                "ordering": ["method", "width"],
                "unique_together": {("run", "method", "width")},
                "indexes": [
                    models.Index(
                        fields=["method", "width"],
                        name="eval_result_method_width_idx",
                    ),
                ],
            },
        ),
    ]
