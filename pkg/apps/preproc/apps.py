from django.apps import AppConfig


class PreprocConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.preproc'
    verbose_name = 'B-scan Preprocessing'
