# Generated by Django 5.0.1 on 2026-10-17 09:12

from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="DictionaryRecord",
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
                ("path", models.CharField(max_length=500)),
                ("sha256", models.CharField(db_index=True, max_length=64)),
                ("scale_tag", models.PositiveIntegerField(default=1)),
                ("atom_len", models.PositiveIntegerField()),
                ("n_atoms", models.PositiveIntegerField()),
                ("sparsity", models.PositiveIntegerField()),
                ("iterations", models.PositiveIntegerField()),
                ("seed", models.BigIntegerField(default=0)),
                ("corpus", models.CharField(blank=True, max_length=500)),
                ("n_images", models.PositiveIntegerField(default=0)),
                ("n_patches", models.PositiveIntegerField(default=0)),
                ("final_error", models.FloatField(blank=True, null=True)),
                ("error_history", models.JSONField(default=list)),
                ("training_time_ms", models.IntegerField(default=0)),
            ],
            options={
                "verbose_name": "Dictionary Record",
                "verbose_name_plural": "Dictionary Records",
                "ordering": ["-created_at"],
                "indexes": [
                    models.Index(
                        fields=["scale_tag", "created_at"],
                        name="sparse_dict_scale_created_idx",
                    ),
                ],
            },
        ),
    ]
