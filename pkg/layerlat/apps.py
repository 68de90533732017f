from django.apps import AppConfig


class LayerlatConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "layerlat"
    verbose_name = "Bunches of layer groups"
