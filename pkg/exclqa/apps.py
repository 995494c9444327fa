from django.apps import AppConfig


class ExclqaConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'exclqa'
    verbose_name = 'Excited-state annealing for SVP'
