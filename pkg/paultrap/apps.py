from django.apps import AppConfig


class PaultrapConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'paultrap'
    verbose_name = 'Paul trap toolkit'
