"""
Django settings for the catclock project.

The project has no database, no web surface and no static files: Django is
used for its management-command CLI, its settings layer and its test runner.

Every numerical default lives in the ``DECOHERENCE`` dictionary and can be
overridden from the environment or a ``.env`` file through python-decouple,
for example::

    QUAD_REL_TOL=1e-11 SWEEP_WORKERS=4 python manage.py sweep_noise --params params/trapped_ion.params
"""

from math import pi
from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='catclock-local-only-not-a-secret')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition
INSTALLED_APPS = [
    'decoherence',  # Decoherence clocks, channels and figure sweeps
]

# Nothing is persisted beyond flat CSV files.
DATABASES = {}

USE_TZ = True


# Numerical configuration
DECOHERENCE = {
    # Phase-space quadrature
    'QUAD_ABS_TOL': config('QUAD_ABS_TOL', default=1e-12, cast=float),
    'QUAD_REL_TOL': config('QUAD_REL_TOL', default=1e-10, cast=float),
    'QUAD_MAX_EVALS': config('QUAD_MAX_EVALS', default=20_000_000, cast=int),
    # Root finding (Brent) and bounded maximisation
    'ROOT_ABS_TOL': config('ROOT_ABS_TOL', default=1e-14, cast=float),
    'ROOT_REL_TOL': config('ROOT_REL_TOL', default=1e-13, cast=float),
    'ROOT_MAX_EVALS': config('ROOT_MAX_EVALS', default=200, cast=int),
    # Truncated Fock-basis integrator
    'ODE_RTOL': config('ODE_RTOL', default=1e-10, cast=float),
    'ODE_ATOL': config('ODE_ATOL', default=1e-13, cast=float),
    # Sweeps
    'SWEEP_WORKERS': config('SWEEP_WORKERS', default=1, cast=int),
    'OMEGA0': config('OMEGA0', default=2 * pi * 1e7, cast=float),
    'RATE_UNITS': config('RATE_UNITS', default='hertz'),
}


# Logging configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
        'decoherence': {
            'handlers': ['console'],
            'level': config('LOG_LEVEL', default='INFO'),
            'propagate': False,
        },
    },
}
