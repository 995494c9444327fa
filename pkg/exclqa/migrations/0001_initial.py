# Generated by Django 5.1.3 on 2026-10-17 12:00

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="LatticeInstance",
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
                ("instance_id", models.CharField(max_length=32)),
                ("rank", models.PositiveIntegerField()),
                ("q", models.PositiveIntegerField()),
                ("d", models.PositiveIntegerField()),
                ("k_qary", models.PositiveIntegerField()),
                (
                    "seed",
                    models.BigIntegerField(
                        help_text="Seed of the q-ary basis this sublattice was cut from"
                    ),
                ),
                (
                    "lambda1_sq",
                    models.BigIntegerField(
                        help_text="Squared length of a shortest nonzero vector"
                    ),
                ),
                (
                    "shortest_x",
                    models.JSONField(
                        default=list,
                        help_text="Canonical shortest coefficient vector",
                    ),
                ),
                ("basis_rows", models.JSONField(default=list)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["rank", "instance_id"],
                "constraints": [
                    models.UniqueConstraint(
                        fields=("instance_id", "seed"),
                        name="unique_instance_per_seed",
                    )
                ],
            },
        ),
        migrations.CreateModel(
            name="RunResult",
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
                ("method", models.CharField(max_length=32)),
                ("rank", models.PositiveIntegerField()),
                ("valid", models.BooleanField()),
                ("solved", models.BooleanField()),
                ("shots_used", models.PositiveIntegerField()),
                ("best_norm_sq", models.BigIntegerField(blank=True, null=True)),
                ("lambda1_sq", models.BigIntegerField()),
                ("approx_factor", models.FloatField(blank=True, null=True)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                (
                    "instance",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="results",
                        to="exclqa.latticeinstance",
                    ),
                ),
            ],
            options={
                "ordering": ["-created_at"],
                "indexes": [
                    models.Index(
                        fields=["method", "rank"], name="exclqa_runr_method_5a1c2e_idx"
                    ),
                    models.Index(
                        fields=["method", "solved"], name="exclqa_runr_method_8d3f41_idx"
                    ),
                ],
            },
        ),
    ]
