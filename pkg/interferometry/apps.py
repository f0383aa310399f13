from django.apps import AppConfig


class InterferometryConfig(AppConfig):
    """The simulation app; it has no models, only management commands."""
    name = 'interferometry'
    verbose_name = 'Two-path multi-photon interferometry'
