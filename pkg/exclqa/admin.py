from django.contrib import admin

from .models import LatticeInstance, RunResult


@admin.register(LatticeInstance)
class LatticeInstanceAdmin(admin.ModelAdmin):
    list_display = ['instance_id', 'rank', 'q', 'd', 'k_qary', 'lambda1_sq', 'created_at']
    list_filter = ['rank', 'q', 'd']
    search_fields = ['instance_id']
    ordering = ['rank', 'instance_id']
    readonly_fields = ['created_at']


@admin.register(RunResult)
class RunResultAdmin(admin.ModelAdmin):
    list_display = ['method', 'instance', 'rank', 'valid', 'solved', 'shots_used', 'approx_factor', 'created_at']
    list_filter = ['method', 'rank', 'valid', 'solved']
    search_fields = ['method', 'instance__instance_id']
    date_hierarchy = 'created_at'
    ordering = ['-created_at']
    readonly_fields = ['created_at']

    def has_add_permission(self, request):
        # Rows come from bench --store only
        return False
