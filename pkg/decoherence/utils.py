"""
Utility functions for settings access, error handling and CSV output
"""
import logging
import traceback

from .exceptions import DecoherenceError, MissingParam, ParameterError, SolverError

logger = logging.getLogger(__name__)

# Mirrors catclock.settings.DECOHERENCE so the numerics work without Django.
DEFAULTS = {
    'QUAD_ABS_TOL': 1e-12,
    'QUAD_REL_TOL': 1e-10,
    'QUAD_MAX_EVALS': 20_000_000,
    'ROOT_ABS_TOL': 1e-14,
    'ROOT_REL_TOL': 1e-13,
    'ROOT_MAX_EVALS': 200,
    'ODE_RTOL': 1e-10,
    'ODE_ATOL': 1e-13,
    'SWEEP_WORKERS': 1,
    'OMEGA0': 6.283185307179586e7,
    'RATE_UNITS': 'hertz',
}


def get_setting(name):
    """
    Read one entry of settings.DECOHERENCE, falling back to the built-in default
    """
    if name not in DEFAULTS:
        raise KeyError(f'Unknown decoherence setting: {name}')
    try:
        from django.conf import settings
        if settings.configured:
            return getattr(settings, 'DECOHERENCE', {}).get(name, DEFAULTS[name])
    except ImportError:
        pass
    return DEFAULTS[name]


def log_error(error, context=None):
    """
    Log errors with context information
    """
    error_info = {
        'error_type': error.__class__.__name__,
        'error_message': str(error),
        'context': context,
    }
    logger.error(f"Error occurred: {error_info}")
    logger.debug(traceback.format_exc())


def exit_code_for(error):
    """
    Map an exception to the command-line exit code: 2 for bad input, 3 for solver failure
    """
    if isinstance(error, ParameterError):
        return 2
    if isinstance(error, SolverError):
        return 3
    return 1


def format_error_message(error):
    """
    Format error message for user display
    """
    if isinstance(error, DecoherenceError):
        return f'{error.__class__.__name__}: {error}'
    return str(error)


def validate_required_fields(data, required_fields):
    """
    Validate that all required fields are present in data
    """
    missing_fields = [field for field in required_fields if data.get(field) is None]
    if missing_fields:
        raise MissingParam(f'Missing required parameters: {", ".join(missing_fields)}')


def csv_header(echo):
    """
    Header comment line carrying the tool version and a full parameter echo
    """
    from catclock import __version__

    pairs = ' '.join(f'{key}={value}' for key, value in echo.items() if value is not None)
    return f'# catclock {__version__} {pairs}'.rstrip()


def write_frame(frame, stream, echo, float_format='%.12g'):
    """
    Write a pandas DataFrame as CSV, preceded by the header comment line
    """
    body = frame.to_csv(index=False, float_format=float_format, lineterminator='\n')
    stream.write(csv_header(echo) + '\n' + body)


def parse_decades(text):
    """
    Parse a 'lo:hi' decade range such as '-8:-4' into a pair of floats
    """
    try:
        lo, hi = (float(part) for part in text.split(':'))
    except ValueError as exc:
        raise ParameterError(f'Expected a decade range like -8:-4, got {text!r}') from exc
    if not lo < hi:
        raise ParameterError(f'Decade range must be increasing, got {text!r}')
    return lo, hi
