"""
Figure sweeps and the consistency report.

- ``sweep_alpha``: indicator times of the dilation channel against the cat
  amplitude, in units of tau_W.
- ``sweep_noise``: classical-noise over gravitational decoherence times on a
  log grid of (gamma, lambda).
- ``consistency_report``: the closed-form relations between tau_dec, the
  interferometric tau_bar and tau_p, with the values usually quoted for them.

Rows and cells that hit a solver error are kept with a ``status`` column
naming the error; sweeps never abort.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from multiprocessing import Pool

import numpy as np
import pandas as pd

from .channels import (
    ClassicalNoiseChannel, DilationChannel, NoiseParams, PhysicalParams, brukner_tau_bar,
    kappa, observer_dilation_excess, observer_frame_time, t_w_classical_closed,
)
from .exceptions import ParameterError, SolverError
from .indicators import (
    NU_DEPTH, NU_WIGNER, klyshko_threshold, tau_dec_dilation, vogel_threshold,
)
from .utils import get_setting, log_error, validate_required_fields

logger = logging.getLogger(__name__)

INDICATORS = ('tau_p', 'tau_w', 'tau_v', 'tau_k')
STATUS_OK = 'ok'


class RateUnits(str, Enum):
    """
    How the (gamma, lambda) grid values become rates in 1/s.

    HERTZ takes the values as rates in 1/s; OMEGA0 multiplies them by
    omega_0 in rad/s.
    """
    HERTZ = 'hertz'
    OMEGA0 = 'omega0'

    def to_per_second(self, value, omega0):
        return value * omega0 if self is RateUnits.OMEGA0 else value


def _strictly_increasing(values, name):
    values = tuple(float(v) for v in values)
    if not values:
        raise ParameterError(f'{name} must not be empty')
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ParameterError(f'{name} must be strictly increasing')
    return values


@dataclass(frozen=True)
class SweepSpec:
    alpha_grid: tuple = ()
    gamma_grid: tuple = ()
    lambda_grid: tuple = ()
    params: PhysicalParams = field(default_factory=PhysicalParams.trapped_ion_defaults)
    indicators: tuple = INDICATORS
    rate_units: RateUnits = RateUnits.HERTZ
    omega0: float = None
    workers: int = None

    def __post_init__(self):
        for name in ('alpha_grid', 'gamma_grid', 'lambda_grid'):
            values = getattr(self, name)
            if values:
                object.__setattr__(self, name, _strictly_increasing(values, name))
        unknown = set(self.indicators) - set(INDICATORS)
        if unknown:
            raise ParameterError(f'Unknown indicators: {", ".join(sorted(unknown))}')
        object.__setattr__(self, 'rate_units', RateUnits(self.rate_units))
        if self.omega0 is None:
            object.__setattr__(self, 'omega0', float(get_setting('OMEGA0')))
        if self.workers is None:
            object.__setattr__(self, 'workers', int(get_setting('SWEEP_WORKERS')))

    @classmethod
    def for_alpha(cls, start=0.5, stop=4.0, points=36, **kwargs):
        if points < 1 or not (0 < start <= stop):
            raise ParameterError(f'Bad alpha range {start}..{stop} with {points} points')
        return cls(alpha_grid=tuple(np.linspace(start, stop, points)), **kwargs)

    @classmethod
    def for_noise(cls, gamma_decades=(-8.0, -4.0), lambda_decades=(-8.0, -4.0), points=61, **kwargs):
        if points < 2:
            raise ParameterError('A noise sweep needs at least 2 points per axis')
        return cls(
            gamma_grid=tuple(np.logspace(*gamma_decades, points)),
            lambda_grid=tuple(np.logspace(*lambda_decades, points)),
            **kwargs,
        )

    def echo(self):
        """Parameters repeated in the CSV header"""
        echo = dict(self.params.as_dict())
        echo.update(rate_units=self.rate_units.value, omega0=self.omega0)
        return echo


@dataclass(frozen=True)
class RatioCell:
    gamma: float
    coupling: float
    indicator: str
    t_classical: float
    t_grav: float
    ratio: float
    shaded: bool
    status: str = STATUS_OK


def _map(function, tasks, workers):
    if workers and workers > 1 and len(tasks) > 1:
        with Pool(processes=workers) as pool:
            return pool.map(function, tasks)
    return [function(task) for task in tasks]


# ---------------------------------------------------------------------------
# Indicator thresholds
# ---------------------------------------------------------------------------

def indicator_thresholds(alpha, indicators=INDICATORS, nu_cap=100.0):
    """Damping level at which each indicator flips, for one cat amplitude"""
    levels = {}
    for name in indicators:
        if name == 'tau_p':
            levels[name] = NU_DEPTH
        elif name == 'tau_w':
            levels[name] = NU_WIGNER
        elif name == 'tau_v':
            levels[name] = vogel_threshold(alpha)
        elif name == 'tau_k':
            levels[name] = klyshko_threshold(alpha, nu_cap=nu_cap)
    return levels


# ---------------------------------------------------------------------------
# Indicator times against alpha
# ---------------------------------------------------------------------------

def _alpha_row(task):
    alpha, kappa_value = task
    channel = DilationChannel(kappa_value)
    tau_w = channel.crossing_time(NU_WIGNER)
    row = {
        'alpha': alpha,
        'tau_dec_over_tau_w': tau_dec_dilation(alpha, kappa_value).tau / tau_w,
        'tau_p_over_tau_w': math.nan,
        'tau_v_over_tau_w': math.nan,
        'tau_k_over_tau_w': math.nan,
        'tau_w_seconds': tau_w,
        'status': STATUS_OK,
    }
    try:
        levels = indicator_thresholds(alpha, nu_cap=channel.nu(10.0 * channel.crossing_time(NU_DEPTH)))
        for name in ('tau_p', 'tau_v', 'tau_k'):
            row[f'{name}_over_tau_w'] = channel.crossing_time(levels[name]) / tau_w
    except SolverError as error:
        log_error(error, {'alpha': alpha})
        row['status'] = error.__class__.__name__
    return row


def sweep_alpha(spec):
    """
    One row per alpha: tau_dec, tau_p, tau_V and tau_K in units of tau_W, plus
    tau_W itself in seconds.
    """
    if not spec.alpha_grid:
        raise ParameterError('sweep_alpha needs a nonempty alpha grid')
    kappa_value = kappa(spec.params)
    tasks = [(alpha, kappa_value) for alpha in spec.alpha_grid]
    rows = _map(_alpha_row, tasks, spec.workers)
    logger.info(f'Alpha sweep: {len(rows)} rows, {sum(r["status"] != STATUS_OK for r in rows)} failed')
    return pd.DataFrame(rows)


# ---------------------------------------------------------------------------
# Classical over gravitational ratio maps
# ---------------------------------------------------------------------------

def _noise_row(task):
    gamma, lambdas, levels, grav_times, rate_units, omega0 = task
    cells = []
    for coupling in lambdas:
        noise = NoiseParams(
            coupling=rate_units.to_per_second(coupling, omega0),
            gamma=rate_units.to_per_second(gamma, omega0),
        )
        channel = ClassicalNoiseChannel(noise)
        for name, level in levels.items():
            t_grav = grav_times[name]
            try:
                if name == 'tau_w':
                    t_classical = t_w_classical_closed(noise)
                else:
                    t_classical = channel.crossing_time(level)
                ratio = t_classical / t_grav
                cells.append(RatioCell(gamma, coupling, name, t_classical, t_grav, ratio, ratio < 1.0))
            except SolverError as error:
                log_error(error, {'gamma': gamma, 'lambda': coupling, 'indicator': name})
                cells.append(RatioCell(
                    gamma, coupling, name, math.nan, t_grav, math.nan, False, error.__class__.__name__,
                ))
    return cells


def sweep_noise(spec):
    """
    Long-format table of RatioCell rows: one per (gamma, lambda, indicator).

    Grid values are converted to rates with ``spec.rate_units``; thresholds
    are computed once for the cat amplitude in ``spec.params``.
    """
    if not (spec.gamma_grid and spec.lambda_grid):
        raise ParameterError('sweep_noise needs nonempty gamma and lambda grids')
    validate_required_fields(spec.params.as_dict(), ['alpha'])
    grav = DilationChannel(kappa(spec.params))
    cap = grav.nu(10.0 * grav.crossing_time(NU_DEPTH))
    levels = indicator_thresholds(spec.params.alpha, spec.indicators, nu_cap=cap)
    grav_times = {name: grav.crossing_time(level) for name, level in levels.items()}
    tasks = [
        (gamma, spec.lambda_grid, levels, grav_times, spec.rate_units, spec.omega0)
        for gamma in spec.gamma_grid
    ]
    cells = [cell for row in _map(_noise_row, tasks, spec.workers) for cell in row]
    frame = pd.DataFrame([asdict(cell) for cell in cells])
    frame = frame.rename(columns={'coupling': 'lambda'})
    logger.info(f'Noise sweep: {len(frame)} cells, {int((frame["status"] != STATUS_OK).sum())} failed')
    return frame


def ratio_contour(frame, indicator):
    """
    For every gamma, the lambda at which ratio = 1, by log-log interpolation
    between neighbouring grid cells; NaN where the row never crosses.
    """
    rows = []
    subset = frame[(frame['indicator'] == indicator) & (frame['status'] == STATUS_OK)]
    for gamma, group in subset.groupby('gamma', sort=True):
        group = group.sort_values('lambda')
        log_ratio = np.log(group['ratio'].to_numpy())
        log_lambda = np.log(group['lambda'].to_numpy())
        crossing = math.nan
        for i in range(len(log_ratio) - 1):
            if log_ratio[i] == 0:
                crossing = math.exp(log_lambda[i])
                break
            if log_ratio[i] * log_ratio[i + 1] < 0:
                weight = log_ratio[i] / (log_ratio[i] - log_ratio[i + 1])
                crossing = math.exp(log_lambda[i] + weight * (log_lambda[i + 1] - log_lambda[i]))
                break
        rows.append({'gamma': gamma, 'lambda_at_unity': crossing})
    return pd.DataFrame(rows, columns=['gamma', 'lambda_at_unity'])


def unity_diagonal(params, rate_units, omega0=None):
    """
    Grid value g with gamma = lambda = g at which the classical tau_W equals
    the gravitational one.
    """
    omega0 = omega0 or float(get_setting('OMEGA0'))
    tau_w_grav = DilationChannel(kappa(params)).crossing_time(NU_WIGNER)
    # On the diagonal t_W scales as 1 / rate.
    scale = t_w_classical_closed(NoiseParams(coupling=1.0, gamma=1.0))
    rate = scale / tau_w_grav
    return rate / omega0 if RateUnits(rate_units) is RateUnits.OMEGA0 else rate


# ---------------------------------------------------------------------------
# Consistency report
# ---------------------------------------------------------------------------

def consistency_report(params):
    """
    Table of quantity, computed value and the value usually quoted for it.

    The quoted relations tau_bar_dec = tau_dec and tau_p = 2 alpha tau_dec do
    not follow from the closed forms; both ratios come out as sqrt(2).
    """
    validate_required_fields(params.as_dict(), ['alpha'])
    alpha = params.alpha
    kappa_value = kappa(params)
    tau_dec = tau_dec_dilation(alpha, kappa_value).tau
    channel = DilationChannel(kappa_value)
    tau_p = channel.crossing_time(NU_DEPTH)
    tau_w = channel.crossing_time(NU_WIGNER)
    rows = [
        ('kappa_per_s2', kappa_value, math.nan),
        ('delta_e_joule', params.energy_spread(), math.nan),
        ('tau_dec_s', tau_dec, math.nan),
        ('tau_w_s', tau_w, math.nan),
        ('tau_p_s', tau_p, math.nan),
        ('tau_p_sq_over_tau_w_sq', (tau_p / tau_w) ** 2, 2.0),
        ('tau_p_over_2alpha_tau_dec', tau_p / (2.0 * alpha * tau_dec), 1.0),
    ]
    dx = params.superposition_size
    if dx is None and params.mass is not None and params.trap_freq is not None:
        dx = 2.0 * alpha * params.zero_point_width()
    if params.n_internal is not None and params.temperature is not None and dx is not None:
        tau_bar = brukner_tau_bar(params.n_internal, params.temperature, params.grav_accel, dx)
        rows += [
            ('tau_bar_dec_s', tau_bar, math.nan),
            ('tau_bar_dec_over_tau_dec', tau_bar / tau_dec, 1.0),
        ]
    for units in RateUnits:
        rows.append((f'unity_diagonal_{units.value}', unity_diagonal(params, units), 1e-6))
    if None not in (params.source_mass, params.r_sys, params.r_obs):
        rows.append((
            'observer_dilation_excess',
            observer_dilation_excess(params.source_mass, params.r_sys, params.r_obs),
            1e-13,
        ))
        rows.append((
            'tau_w_observer_s',
            observer_frame_time(tau_w, params.source_mass, params.r_sys, params.r_obs),
            math.nan,
        ))
    frame = pd.DataFrame(rows, columns=['quantity', 'computed', 'claimed'])
    frame['ratio'] = frame['computed'] / frame['claimed']
    return frame
