"""
Django settings for the fringelab project.

The project has no web surface: Django provides the command-line front end
(``manage.py``), the configuration layer, logging and the test runner, while
Django REST Framework provides the serializers and JSON rendering used for the
exported reports.

For more information on this file, see
https://docs.djangoproject.com/en/5.0/topics/settings/
"""

import os

# Nothing is served, but Django still insists on a secret key.
SECRET_KEY = os.environ.get('FRINGELAB_SECRET_KEY', 'fringelab-offline-simulation-key')

DEBUG = os.environ.get('FRINGELAB_DEBUG', '') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Django's built-in apps required by Django REST Framework
    'django.contrib.contenttypes',
    'django.contrib.auth',

    # Third-party apps (installed via pip)
    'rest_framework',              # serializers and the JSON renderer for reports

    # Our simulation app: operator algebra, exact evolution, semiclassics,
    # fringe analysis and the management commands
    'interferometry',
]


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Simulation settings
# Read through interferometry.conf.fringelab_settings; any key left out falls
# back to the defaults declared there.

FRINGELAB = {
    # Phase samples used over (0, pi) when a command does not say otherwise
    'GRID_POINTS': 4096,

    # Weak values are flagged when |<m|psi(phi)>| drops below this fraction of
    # the largest amplitude on the grid
    'SINGULARITY_THRESHOLD': 1e-6,

    # Distance (radians) kept from the support edges by the WKB amplitude
    'SUPPORT_MARGIN': 0.05,

    # 'exact' uses sqrt(N(N+2))/2 for the length of the J-vector,
    # 'shifted' uses the (N+1)/2 shorthand
    'LENGTH_CONVENTION': 'exact',

    # Bisection tolerance (radians) for zeros and support edges
    'ZERO_XTOL': 1e-12,

    # Monte-Carlo samples per deterministic substream
    'MC_CHUNK_SIZE': 65536,

    # Worker cap for the Monte-Carlo oracle, a positive integer; None lets the
    # executor decide
    'THREADS': os.environ.get('FRINGELAB_THREADS') or None,

    'CSV_SIGNIFICANT_DIGITS': 12,
    'SCHEMA_VERSION': 1,
}


# Logging
# Library modules log through logging.getLogger(__name__); everything under
# the 'interferometry' package goes to stderr.

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'interferometry': {
            'handlers': ['console'],
            'level': os.environ.get('FRINGELAB_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
