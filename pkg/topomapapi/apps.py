from django.apps import AppConfig


class TopomapapiConfig(AppConfig):
    name = 'topomapapi'
    default_auto_field = 'django.db.models.AutoField'
