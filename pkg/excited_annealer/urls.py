"""
URL configuration for the excited_annealer project.

Only the admin is served; it browses stored benchmark results.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
