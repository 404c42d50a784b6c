"""
Gaussian attenuation channels and their dimensional plumbing.

Both decoherence mechanisms act on the characteristic function as a Gaussian
damping exp(-nu(t)|xi|^2):

- gravitational time dilation, nu(t) = kappa t^2 / 2, with kappa fixed by the
  internal energy spread, the zero-point width and g;
- classical Ornstein-Uhlenbeck noise, nu(t) = sigma(t).

Every indicator is a threshold on nu, so a channel only has to expose nu(t)
and its inverse (``crossing_time``).
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, fields
from enum import Enum
from functools import lru_cache

import numpy as np
from decouple import RepositoryEnv
from scipy.integrate import quad

from .constants import BOLTZMANN, GRAV_ACCEL, HBAR, NEWTON_G, OMEGA0, SPEED_OF_LIGHT
from .exceptions import (
    ConvergenceError, DomainError, InsideHorizon, MissingParam, NoCrossing, ParameterError,
)
from .numerics import Branch, Bracket, Tolerance, find_root, lambert_w

logger = logging.getLogger(__name__)


class DampingGeometry(str, Enum):
    """
    How the damping exponent is distributed over xi = u + iv.

    ISOTROPIC damps as exp(-nu (u^2 + v^2)): the free-rotation average of
    position dephasing, and the classical noise channel. POSITION damps as
    exp(-2 nu u^2): the bare double commutator -Delta [X, [X, rho]].
    """
    ISOTROPIC = 'isotropic'
    POSITION = 'position'

    @property
    def coefficients(self):
        """Multipliers (c_u, c_v) of nu in front of u^2 and v^2"""
        if self is DampingGeometry.POSITION:
            return 2.0, 0.0
        return 1.0, 1.0


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional inputs in SI units; everything is optional until needed"""
    mass: float = None
    trap_freq: float = None
    grav_accel: float = GRAV_ACCEL
    temperature: float = None
    n_internal: float = None
    delta_e: float = None
    superposition_size: float = None
    alpha: float = None
    source_mass: float = None
    r_sys: float = None
    r_obs: float = None
    mean_energy: float = None  # accepted, unused: it only shifts the unitary part

    def __post_init__(self):
        for field in fields(self):
            value = getattr(self, field.name)
            if value is None:
                continue
            if not math.isfinite(value):
                raise ParameterError(f'{field.name} must be finite, got {value!r}')
            if field.name == 'mean_energy':
                continue
            if field.name == 'delta_e':
                if value < 0:
                    raise ParameterError(f'delta_e must be nonnegative, got {value!r}')
            elif value <= 0:
                raise ParameterError(f'{field.name} must be positive, got {value!r}')

    @classmethod
    def field_names(cls):
        return [field.name for field in fields(cls)]

    @classmethod
    def from_mapping(cls, data):
        unknown = sorted(set(data) - set(cls.field_names()))
        if unknown:
            raise ParameterError(f'Unknown parameter keys: {", ".join(unknown)}')
        values = {}
        for key, raw in data.items():
            try:
                values[key] = float(raw)
            except (TypeError, ValueError) as exc:
                raise ParameterError(f'{key} must be a number, got {raw!r}') from exc
        return cls(**values)

    @classmethod
    def from_file(cls, path):
        """
        Load a flat key=value parameter file (snake-case field names, SI units)
        """
        try:
            repository = RepositoryEnv(str(path))
        except OSError as exc:
            raise ParameterError(f'Cannot read parameter file {path}: {exc}') from exc
        return cls.from_mapping(dict(repository.data))

    @classmethod
    def trapped_ion_defaults(cls):
        """Delta x = 1 um, alpha = sqrt(2), T = 300 K, N = 1e5 internal modes"""
        return cls(
            superposition_size=1e-6, alpha=math.sqrt(2.0), temperature=300.0,
            n_internal=1e5, trap_freq=OMEGA0,
        )

    def replace(self, **changes):
        data = asdict(self)
        data.update(changes)
        return PhysicalParams(**data)

    def as_dict(self):
        return {key: value for key, value in asdict(self).items() if value is not None}

    def zero_point_width(self):
        """Delta x_0 = sqrt(hbar / (m omega_0)), or Delta x / (2 alpha)"""
        if self.mass is not None and self.trap_freq is not None:
            return math.sqrt(HBAR / (self.mass * self.trap_freq))
        if self.superposition_size is not None and self.alpha is not None:
            return self.superposition_size / (2.0 * self.alpha)
        raise MissingParam('Need either (mass, trap_freq) or (superposition_size, alpha)')

    def energy_spread(self):
        """Delta E_0, given directly or from the thermal internal state"""
        if self.delta_e is not None:
            return self.delta_e
        if self.n_internal is not None and self.temperature is not None:
            return delta_e_thermal(self.n_internal, self.temperature)
        raise MissingParam('Need delta_e or both n_internal and temperature')


@dataclass(frozen=True)
class NoiseParams:
    """Ornstein-Uhlenbeck noise: coupling lambda, inverse memory time gamma, detuning delta"""
    coupling: float
    gamma: float
    detuning: float = 0.0

    def __post_init__(self):
        if not (self.coupling > 0 and self.gamma > 0):
            raise ParameterError(f'Noise coupling and gamma must be positive: {self}')
        if not math.isfinite(self.detuning):
            raise ParameterError(f'Detuning must be finite, got {self.detuning!r}')

    @property
    def resonant(self):
        return self.detuning == 0.0


# ---------------------------------------------------------------------------
# Dimensional plumbing
# ---------------------------------------------------------------------------

def delta_e_thermal(n_internal, temperature):
    """Energy spread sqrt(N) k_B T of N thermal internal modes"""
    if n_internal < 1 or temperature <= 0:
        raise ParameterError(
            f'Thermal energy spread needs N >= 1 and T > 0, got N={n_internal}, T={temperature}'
        )
    return math.sqrt(n_internal) * BOLTZMANN * temperature


def kappa(params):
    """Dilation strength kappa = Delta x_0^2 (Delta E_0 g / (hbar c^2))^2, in 1/s^2"""
    width = params.zero_point_width()
    coupling = params.energy_spread() * params.grav_accel / (HBAR * SPEED_OF_LIGHT ** 2)
    return width ** 2 * coupling ** 2


def brukner_visibility(n_internal, temperature, grav_accel, dx, t):
    """Interferometric visibility (1 + (k_B T g dx t / (hbar c^2))^2)^(-N/2)"""
    if min(n_internal, temperature, grav_accel, dx) <= 0:
        raise ParameterError('Visibility inputs must be positive')
    a = BOLTZMANN * temperature * grav_accel * dx * np.asarray(t, dtype=float) / (HBAR * SPEED_OF_LIGHT ** 2)
    return np.exp(-0.5 * n_internal * np.log1p(a ** 2))


def brukner_tau_bar(n_internal, temperature, grav_accel, dx):
    """Gaussian decay time of the visibility: sqrt(2) hbar c^2 / (sqrt(N) k_B T g dx)"""
    if min(n_internal, temperature, grav_accel, dx) <= 0:
        raise ParameterError('Visibility inputs must be positive')
    return math.sqrt(2.0) * HBAR * SPEED_OF_LIGHT ** 2 / (
        math.sqrt(n_internal) * BOLTZMANN * temperature * grav_accel * dx
    )


def brukner_visibility_gaussian(n_internal, temperature, grav_accel, dx, t):
    """Small-time form exp(-(t / tau_bar)^2)"""
    tau_bar = brukner_tau_bar(n_internal, temperature, grav_accel, dx)
    return np.exp(-(np.asarray(t, dtype=float) / tau_bar) ** 2)


def schwarzschild_radius(source_mass):
    return 2.0 * NEWTON_G * source_mass / SPEED_OF_LIGHT ** 2


def _log_dilation_ratio(source_mass, r_sys, r_obs):
    r_s = schwarzschild_radius(source_mass)
    for name, r in (('r_sys', r_sys), ('r_obs', r_obs)):
        if r <= r_s:
            raise InsideHorizon(f'{name}={r:.6g} m lies inside r_s={r_s:.6g} m')
    return 0.5 * (math.log1p(-r_s / r_obs) - math.log1p(-r_s / r_sys))


def observer_dilation_factor(source_mass, r_sys, r_obs):
    """a_obs / a_sys with a = sqrt(1 - r_s / r)"""
    return math.exp(_log_dilation_ratio(source_mass, r_sys, r_obs))


def observer_dilation_excess(source_mass, r_sys, r_obs):
    """factor - 1, without cancellation"""
    return math.expm1(_log_dilation_ratio(source_mass, r_sys, r_obs))


def observer_frame_time(tau, source_mass, r_sys, r_obs):
    """A system-frame decoherence time as measured by the observer"""
    return tau * observer_dilation_factor(source_mass, r_sys, r_obs)


# ---------------------------------------------------------------------------
# Ornstein-Uhlenbeck noise
# ---------------------------------------------------------------------------

def sigma_resonant(noise, t):
    """sigma(t) = lambda t + (lambda / gamma)(exp(-gamma t) - 1); t may be an array"""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError('sigma(t) needs t >= 0')
    x = noise.gamma * t
    small = x < 1e-3
    series = noise.coupling * noise.gamma * t ** 2 * (0.5 - x / 6.0 + x ** 2 / 24.0 - x ** 3 / 120.0)
    exact = (noise.coupling / noise.gamma) * (x + np.expm1(-np.where(small, 1.0, x)))
    result = np.where(small, series, exact)
    return float(result) if result.ndim == 0 else result


def sigma_general(noise, t, tol=None):
    """
    sigma(t) = lambda gamma int_0^t (t - tau) cos(delta tau) exp(-gamma tau) dtau,
    the OU double integral folded onto the lag variable.
    """
    tol = tol or Tolerance.default()
    t = float(t)
    if t < 0:
        raise ParameterError('sigma(t) needs t >= 0')
    if t == 0.0:
        return 0.0

    def kernel(tau):
        return (t - tau) * math.exp(-noise.gamma * tau)

    options = dict(epsabs=0.0, epsrel=max(tol.rel, 1e-13), limit=500, full_output=1)
    if noise.detuning == 0.0:
        result = quad(kernel, 0.0, t, **options)
    else:
        result = quad(kernel, 0.0, t, weight='cos', wvar=noise.detuning, **options)
    if len(result) > 3:
        raise ConvergenceError(f'sigma quadrature failed: {result[3]}')
    return noise.coupling * noise.gamma * result[0]


def sigma_detuned(noise, t):
    """
    Closed form of ``sigma_general``: lambda gamma Re[t / z - (1 - exp(-z t)) / z^2]
    with z = gamma - i delta; t may be an array.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError('sigma(t) needs t >= 0')
    z = complex(noise.gamma, -noise.detuning)
    zt = z * t
    small = np.abs(zt) < 1e-3
    series = t ** 2 * (0.5 - zt / 6.0 + zt ** 2 / 24.0 - zt ** 3 / 120.0)
    safe_zt = np.where(small, 1.0, zt)
    exact = t / z - (1.0 - np.exp(-safe_zt)) / z ** 2
    result = noise.coupling * noise.gamma * np.where(small, series, exact).real
    return float(result) if result.ndim == 0 else result


def monotone_after(noise):
    """Past this time d sigma / dt > 0 even with detuning"""
    return math.log1p(abs(noise.detuning) / noise.gamma) / noise.gamma


@lru_cache(maxsize=4096)
def lambert_branch_for(coupling, gamma):
    """
    The Lambert W branch whose closed form reproduces the root of sigma(t) = 1/2.

    Selected once per (lambda, gamma) by comparing both real branches against
    Brent's method on the resonant sigma.
    """
    noise = NoiseParams(coupling=coupling, gamma=gamma)
    root = ClassicalNoiseChannel(noise).crossing_time(0.5, closed_form=False)
    best, best_gap = None, math.inf
    for branch in Branch:
        try:
            candidate = _t_w_from_branch(noise, branch)
        except DomainError:
            continue
        gap = abs(candidate - root)
        if gap < best_gap:
            best, best_gap = branch, gap
    logger.debug(f'Lambert branch for lambda={coupling:.3g}, gamma={gamma:.3g}: {best.value}')
    return best


def _t_w_from_branch(noise, branch):
    q = noise.gamma / (2.0 * noise.coupling)
    argument = -math.exp(-1.0 - q)
    w = lambert_w(branch, argument, branch_offset=-math.expm1(-q))
    return (noise.gamma + 2.0 * noise.coupling) / (2.0 * noise.gamma * noise.coupling) + w / noise.gamma


def t_w_classical_closed(noise):
    """
    Time at which sigma(t) = 1/2 for resonant OU noise, in units of 1/rate:

        t = (gamma + 2 lambda) / (2 gamma lambda) + W(-exp(-1 - gamma / (2 lambda))) / gamma
    """
    branch = lambert_branch_for(noise.coupling, noise.gamma)
    t = _t_w_from_branch(noise, branch)
    if not (t > 0 and math.isfinite(t)):
        raise DomainError(f'No positive crossing from the closed form for {noise}')
    return t


# ---------------------------------------------------------------------------
# Channels
# ---------------------------------------------------------------------------

class AttenuationChannel(ABC):
    """A Gaussian damping law nu(t) with nu(0) = 0, nondecreasing in t"""
    label = 'channel'
    geometry = DampingGeometry.ISOTROPIC

    @abstractmethod
    def nu(self, t):
        """Damping exponent at time t (seconds); t may be an array"""

    @abstractmethod
    def crossing_time(self, level, tol=None):
        """The time at which nu first reaches ``level``"""

    def __repr__(self):
        return f'<{self.__class__.__name__} {self.label}>'


class DilationChannel(AttenuationChannel):
    """Gravitational time dilation: nu(t) = kappa t^2 / 2"""
    label = 'dilation'

    def __init__(self, kappa_value):
        if not kappa_value >= 0:
            raise ParameterError(f'kappa must be nonnegative, got {kappa_value!r}')
        self.kappa = float(kappa_value)

    def nu(self, t):
        t = np.asarray(t, dtype=float)
        result = 0.5 * self.kappa * t ** 2
        return float(result) if result.ndim == 0 else result

    def crossing_time(self, level, tol=None):
        if level < 0:
            raise ParameterError(f'Damping level must be nonnegative, got {level!r}')
        if self.kappa == 0:
            raise NoCrossing('kappa = 0: the dilation channel never damps')
        return math.sqrt(2.0 * level / self.kappa)


class ClassicalNoiseChannel(AttenuationChannel):
    """Classical Ornstein-Uhlenbeck noise: nu(t) = sigma(t)"""
    label = 'classical'

    # sigma grows at least linearly; give up after this many bracket doublings
    MAX_DOUBLINGS = 200
    # samples per detuning period when scanning the oscillating stretch of sigma
    SCAN_PER_PERIOD = 64
    MAX_SCAN_POINTS = 4_000_000

    def __init__(self, noise, tol=None):
        self.noise = noise
        self.tol = tol

    def nu(self, t):
        if self.noise.resonant:
            return sigma_resonant(self.noise, t)
        t = np.asarray(t, dtype=float)
        if t.ndim == 0:
            return sigma_general(self.noise, float(t), self.tol)
        return np.array([sigma_general(self.noise, float(x), self.tol) for x in t.ravel()]).reshape(t.shape)

    def crossing_time(self, level, tol=None, closed_form=True):
        if level < 0:
            raise ParameterError(f'Damping level must be nonnegative, got {level!r}')
        if level == 0:
            return 0.0
        if closed_form and level == 0.5 and self.noise.resonant:
            return t_w_classical_closed(self.noise)
        noise = self.noise
        if noise.resonant:
            # sigma(t) >= lambda t - lambda / gamma
            hi = (level + noise.coupling / noise.gamma) / noise.coupling
        else:
            hi = 1.0 / noise.gamma + level / noise.coupling
        for _ in range(self.MAX_DOUBLINGS):
            if self.nu(hi) >= level:
                break
            hi *= 2.0
        else:
            raise NoCrossing(f'sigma(t) stays below {level} for {noise}')
        bracket = Bracket(0.0, hi) if noise.resonant else self._first_crossing_bracket(level, hi)
        return find_root(lambda t: self.nu(t) - level, bracket, tol)

    def _first_crossing_bracket(self, level, hi):
        """
        Detuned sigma oscillates before it settles into growth, so Brent on
        [0, hi] may land on a later crossing; sample the oscillating stretch
        with the closed form and bracket the first upward crossing.
        """
        noise = self.noise
        stop = min(hi, monotone_after(noise))
        period = 2.0 * math.pi / abs(noise.detuning)
        points = int(min(self.MAX_SCAN_POINTS, math.ceil(self.SCAN_PER_PERIOD * stop / period) + 2))
        times = np.linspace(0.0, stop, points)
        above = np.flatnonzero(sigma_detuned(noise, times) >= level)
        if not above.size:
            return Bracket(stop, hi) if stop < hi else Bracket(0.0, hi)
        lo, up = times[above[0] - 1], hi
        for index in above:
            # the quadrature nu must agree that this sample is past the level
            if self.nu(times[index]) >= level:
                up = times[index]
                break
        logger.debug(f'First crossing of sigma = {level} bracketed in [{lo:.6g}, {up:.6g}]')
        return Bracket(lo, up)


def dilation_channel(params):
    return DilationChannel(kappa(params))


def classical_channel(noise, tol=None):
    return ClassicalNoiseChannel(noise, tol=tol)
