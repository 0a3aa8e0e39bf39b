# Generated by Django 5.0.1 on 2026-10-17 09:12

from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="InpaintLog",
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
                ("source", models.CharField(blank=True, max_length=500)),
                ("width", models.PositiveIntegerField()),
                ("height", models.PositiveIntegerField()),
                ("shadowed_columns", models.PositiveIntegerField(default=0)),
                ("narrow_shadows", models.PositiveIntegerField(default=0)),
                ("wide_shadows", models.PositiveIntegerField(default=0)),
                ("coded_patches", models.PositiveIntegerField(default=0)),
                ("fallback_patches", models.PositiveIntegerField(default=0)),
                ("regularized_patches", models.PositiveIntegerField(default=0)),
                ("upsampler", models.CharField(blank=True, max_length=20)),
                ("multiscale", models.BooleanField(default=True)),
                ("config", models.JSONField(default=dict)),
                (
                    "status",
                    models.CharField(
                        choices=[("SUCCESS", "Success"), ("FAILED", "Failed")],
                        default="SUCCESS",
                        max_length=10,
                    ),
                ),
                ("execution_time_ms", models.IntegerField(default=0)),
                ("error_message", models.TextField(blank=True)),
            ],
            options={
                "verbose_name": "Inpaint Log",
                "verbose_name_plural": "Inpaint Logs",
                "ordering": ["-created_at"],
                "indexes": [
                    models.Index(
                        fields=["status", "created_at"],
                        name="pipeline_log_status_idx",
                    ),
                ],
            },
        ),
    ]
