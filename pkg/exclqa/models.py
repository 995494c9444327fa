from django.db import models


class LatticeInstance(models.Model):
    """
    A benchmark sublattice and its certified shortest vector.
    The same instance id can recur under different master seeds, so
    (instance_id, seed) identifies a row.
    """
    instance_id = models.CharField(max_length=32)
    rank = models.PositiveIntegerField()
    q = models.PositiveIntegerField()
    d = models.PositiveIntegerField()
    k_qary = models.PositiveIntegerField()
    seed = models.BigIntegerField(help_text='Seed of the q-ary basis this sublattice was cut from')
    lambda1_sq = models.BigIntegerField(help_text='Squared length of a shortest nonzero vector')
    shortest_x = models.JSONField(default=list, help_text='Canonical shortest coefficient vector')
    basis_rows = models.JSONField(default=list)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['rank', 'instance_id']
        app_label = 'exclqa'
        constraints = [
            models.UniqueConstraint(fields=['instance_id', 'seed'], name='unique_instance_per_seed'),
        ]

    def __str__(self):
        return f"{self.instance_id} (rank {self.rank}, lambda1^2={self.lambda1_sq})"


class RunResult(models.Model):
    """One solver's outcome on one instance (a results.csv row)."""
    method = models.CharField(max_length=32)
    instance = models.ForeignKey(LatticeInstance, on_delete=models.CASCADE, related_name='results')
    rank = models.PositiveIntegerField()
    valid = models.BooleanField()
    solved = models.BooleanField()
    shots_used = models.PositiveIntegerField()
    best_norm_sq = models.BigIntegerField(null=True, blank=True)
    lambda1_sq = models.BigIntegerField()
    approx_factor = models.FloatField(null=True, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']
        app_label = 'exclqa'
        indexes = [
            models.Index(fields=['method', 'rank'], name='exclqa_runr_method_5a1c2e_idx'),
            models.Index(fields=['method', 'solved'], name='exclqa_runr_method_8d3f41_idx'),
        ]

    def __str__(self):
        status = 'solved' if self.solved else 'unsolved'
        return f"{self.method} on {self.instance.instance_id}: {status}"
