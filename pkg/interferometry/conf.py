"""
Simulation settings for the interferometry app.

Settings are declared in the project's ``settings.py`` under ``FRINGELAB``::

    FRINGELAB = {
        'GRID_POINTS': 4096,
        'LENGTH_CONVENTION': 'exact',
    }

and read as attributes of ``fringelab_settings``. Keys that are not given fall
back to ``DEFAULTS``. This is the same mechanism DRF uses for its own
``REST_FRAMEWORK`` dictionary, including reloading under ``override_settings``.
"""
from django.conf import settings
from django.core.exceptions import ImproperlyConfigured
from django.core.signals import setting_changed
from rest_framework.settings import APISettings

DEFAULTS = {
    'GRID_POINTS': 4096,
    'SINGULARITY_THRESHOLD': 1e-6,
    'SUPPORT_MARGIN': 0.05,
    'LENGTH_CONVENTION': 'exact',
    'ZERO_XTOL': 1e-12,
    'MC_CHUNK_SIZE': 65536,
    'THREADS': None,
    'CSV_SIGNIFICANT_DIGITS': 12,
    'SCHEMA_VERSION': 1,
}

LENGTH_CONVENTIONS = ('exact', 'shifted')


class FringeLabSettings(APISettings):
    """APISettings reading the ``FRINGELAB`` dictionary instead of ``REST_FRAMEWORK``."""

    @property
    def user_settings(self):
        """The FRINGELAB dictionary from the project settings, read once per reload."""
        if not hasattr(self, '_user_settings'):
            self._user_settings = getattr(settings, 'FRINGELAB', {})
        return self._user_settings


fringelab_settings = FringeLabSettings(None, DEFAULTS)


def thread_count():
    """
    The THREADS setting as a worker count for ThreadPoolExecutor.

    Returns:
        None when unset, otherwise a positive int.  String values (as read
        from FRINGELAB_THREADS) are parsed.

    Raises:
        ImproperlyConfigured: the value is not an integer >= 1.
    """
    value = fringelab_settings.THREADS
    if value is None:
        return None
    try:
        count = int(str(value).strip())
    except ValueError:
        raise ImproperlyConfigured(
            f'FRINGELAB THREADS (FRINGELAB_THREADS) must be a positive integer, got {value!r}'
        ) from None
    if count < 1:
        raise ImproperlyConfigured(
            f'FRINGELAB THREADS (FRINGELAB_THREADS) must be at least 1, got {value!r}'
        )
    return count


def reload_fringelab_settings(*args, **kwargs):
    """Drop cached values when a test overrides FRINGELAB."""
    if kwargs['setting'] == 'FRINGELAB':
        fringelab_settings.reload()


setting_changed.connect(reload_fringelab_settings)
