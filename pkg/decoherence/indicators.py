"""
Nonclassicality clocks for the damped cat.

Each state-level indicator depends on the channel only through nu, so it is
computed as a threshold nu_X(alpha) once and then mapped to a time with the
channel's ``crossing_time``:

    tau_dec  fringe visibility, nu = 1 / (8 alpha^2)
    tau_p    nonclassical depth reaches 0, nu = 1
    tau_W    Wigner function becomes nonnegative, nu = 1/2
    tau_V    Vogel: chi(u, 0, 1) no longer exceeds 1, nu = nu_V(alpha)
    tau_K    Klyshko: B(1) changes sign, nu = nu_K(alpha)
"""
import logging
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .channels import DampingGeometry
from .exceptions import NoCrossing, ParameterError
from .numerics import Bracket, Tolerance, find_root, maximize_1d
from .phase_space import photon_distribution
from .states import EvenCatState, cat_pmf_exact, wigner_closed_form
from .utils import validate_required_fields

logger = logging.getLogger(__name__)

NU_DEPTH = 1.0
NU_WIGNER = 0.5

# B(1) is quadrature-limited; looser than the closed-form root tolerance.
KLYSHKO_ROOT_TOL = Tolerance(abs=1e-12, rel=1e-10, max_evals=200)


@dataclass(frozen=True)
class IndicatorTimes:
    channel: str
    alpha: float
    tau_dec: float
    tau_p: float
    tau_w: float
    tau_v: float
    tau_k: float

    COLUMNS = ('channel', 'alpha', 'tau_dec', 'tau_p', 'tau_w', 'tau_v', 'tau_k')

    def as_row(self):
        return asdict(self)

    def is_ordered(self, slack=0.0):
        """tau_K < tau_V < tau_W < tau_p, each gap larger than ``slack``"""
        return (
            self.tau_k + slack < self.tau_v
            and self.tau_v + slack < self.tau_w
            and self.tau_w + slack < self.tau_p
        )

    def relative_to_tau_w(self):
        return {name: getattr(self, name) / self.tau_w for name in ('tau_dec', 'tau_p', 'tau_v', 'tau_k')}


class DecoherenceTime(NamedTuple):
    tau: float
    validity_bound: float


def _check_alpha(alpha):
    validate_required_fields({'alpha': alpha}, ['alpha'])
    if not alpha > 0:
        raise ParameterError(f'Indicator times need alpha > 0, got {alpha!r}')


# ---------------------------------------------------------------------------
# Closed-form clocks
# ---------------------------------------------------------------------------

def tau_dec_dilation(alpha, kappa):
    """
    tau_dec = 1 / (2 alpha sqrt(kappa)); the Gaussian fringe decay only holds
    for t much shorter than tau_dec * Delta x / Delta x_0 = 1 / sqrt(kappa).
    """
    if not (alpha > 0 and kappa > 0):
        raise ParameterError(f'tau_dec needs alpha > 0 and kappa > 0, got {alpha!r}, {kappa!r}')
    tau = 1.0 / (2.0 * alpha * math.sqrt(kappa))
    return DecoherenceTime(tau=tau, validity_bound=2.0 * alpha * tau)


def fringe_threshold(alpha):
    """nu at which the small-damping fringe visibility exp(-8 alpha^2 nu) reaches 1/e"""
    _check_alpha(alpha)
    return 1.0 / (8.0 * alpha ** 2)


def tau_dec(alpha, channel, tol=None):
    return channel.crossing_time(fringe_threshold(alpha), tol)


def tau_p(channel, tol=None):
    """Time at which nu = 1: the s-ordering 1 - 2 nu reaches -1"""
    return channel.crossing_time(NU_DEPTH, tol)


def tau_w(channel, tol=None):
    """Time at which nu = 1/2 and the Wigner function turns nonnegative"""
    return channel.crossing_time(NU_WIGNER, tol)


def nonclassical_depth(channel, t):
    """eta(t) = 1 - nu(t), clipped to [0, 1]"""
    return float(np.clip(1.0 - channel.nu(t), 0.0, 1.0))


# ---------------------------------------------------------------------------
# Vogel criterion
# ---------------------------------------------------------------------------

def _vogel_log_chi(alpha, nu, u):
    """log chi(u, 0, 1) for the isotropically damped cat, stable for large u"""
    log_overlap = -2.0 * alpha ** 2
    log_norm = math.log1p(math.exp(log_overlap))
    stretch = alpha * u
    if stretch > 20.0:
        excess = np.logaddexp(0.0, log_overlap + 2.0 * stretch - math.log(2.0) - log_norm)
    else:
        excess = math.log1p(2.0 * math.exp(log_overlap - log_norm) * math.sinh(stretch) ** 2)
    return -nu * u ** 2 + excess


def vogel_witness(alpha, nu, tol=None):
    """
    sup over u > 0 of (chi(u, 0, 1) - 1)(1 + u^2) / u^2.

    Positive exactly when the normally ordered chi exceeds 1 somewhere; the
    weight keeps the sign informative at u -> 0 where chi -> 1 for every state.
    """
    _check_alpha(alpha)

    def weighted(u):
        log_chi = min(_vogel_log_chi(alpha, nu, u), 700.0)
        return math.expm1(log_chi) * (1.0 + u * u) / (u * u)

    upper = alpha / max(nu, 1e-3) + 10.0 / math.sqrt(max(nu, 0.05))
    _, value = maximize_1d(weighted, Bracket(1e-6, upper), tol)
    return value


def vogel_threshold(alpha, tol=None):
    """nu_V(alpha): the damping at which the Vogel witness reaches zero"""
    _check_alpha(alpha)
    return _vogel_threshold(float(alpha), tol or Tolerance.for_roots())


@lru_cache(maxsize=512)
def _vogel_threshold(alpha, tol):
    hi = NU_WIGNER
    if vogel_witness(alpha, hi, tol) >= 0:
        raise NoCrossing(f'Vogel witness still positive at nu = 1/2 for alpha = {alpha}')
    lo = 0.05
    for _ in range(30):
        if vogel_witness(alpha, lo, tol) > 0:
            break
        lo *= 0.5
    else:
        raise NoCrossing(f'Vogel witness never positive for alpha = {alpha}')
    nu_v = find_root(lambda nu: vogel_witness(alpha, nu, tol), Bracket(lo, hi), tol)
    logger.debug(f'Vogel threshold alpha={alpha:.6g}: nu_V={nu_v:.12g}')
    return nu_v


def tau_v(alpha, channel, tol=None):
    return channel.crossing_time(vogel_threshold(alpha, tol), tol)


# ---------------------------------------------------------------------------
# Klyshko criterion
# ---------------------------------------------------------------------------

def klyshko_B(n, pmf):
    """B(n) = (n + 2) p(n) p(n + 2) - (n + 1) p(n + 1)^2; negative is nonclassical"""
    if n < 0:
        raise ParameterError(f'Klyshko index must be nonnegative, got {n}')
    p = pmf if callable(pmf) else pmf.__getitem__
    return (n + 2) * p(n) * p(n + 2) - (n + 1) * p(n + 1) ** 2


def cat_photon_distribution(alpha, nu, n_max, tol=None):
    """Photon-number distribution of the isotropically damped cat, by quadrature"""
    state = EvenCatState(alpha)
    return photon_distribution(state.characteristic(nu), n_max, tol)


def klyshko_series(alpha, nu, n_max, tol=None):
    """B(0) .. B(n_max) for the damped cat"""
    pmf = cat_photon_distribution(alpha, nu, n_max + 2, tol)
    return [klyshko_B(n, pmf) for n in range(n_max + 1)]


def _klyshko_b1(alpha, nu, tol):
    if nu == 0:
        p2 = cat_pmf_exact(EvenCatState(alpha), 2)
        return -2.0 * p2 ** 2
    return klyshko_B(1, cat_photon_distribution(alpha, nu, 3, tol))


def klyshko_threshold(alpha, tol=None, nu_cap=100.0):
    """nu_K(alpha): first damping at which B(1) reaches zero"""
    _check_alpha(alpha)
    return _klyshko_threshold(float(alpha), tol or Tolerance.default(), float(nu_cap))


@lru_cache(maxsize=512)
def _klyshko_threshold(alpha, tol, nu_cap):
    scan = np.concatenate([[0.0], np.geomspace(1e-4, NU_WIGNER, 24)])
    previous_nu, previous_b = 0.0, _klyshko_b1(alpha, 0.0, tol)
    if previous_b >= 0:
        raise NoCrossing(f'B(1) is already nonnegative at t = 0 for alpha = {alpha}')

    def candidates():
        yield from scan[1:]
        nu = NU_WIGNER
        while nu < nu_cap:
            nu = min(2.0 * nu, nu_cap)
            yield nu

    for nu in candidates():
        b = _klyshko_b1(alpha, nu, tol)
        if b >= 0:
            root = find_root(
                lambda x: _klyshko_b1(alpha, x, tol), Bracket(previous_nu, nu), KLYSHKO_ROOT_TOL,
            )
            logger.debug(f'Klyshko threshold alpha={alpha:.6g}: nu_K={root:.12g}')
            return root
        previous_nu, previous_b = nu, b
    raise NoCrossing(f'B(1) stays negative up to nu = {nu_cap:g} for alpha = {alpha}')


def tau_k(alpha, channel, tol=None):
    """First time at which B(1) of the damped cat reaches zero; capped at 10 tau_p"""
    cap = float(channel.nu(10.0 * tau_p(channel)))
    return channel.crossing_time(klyshko_threshold(alpha, tol, nu_cap=cap))


# ---------------------------------------------------------------------------
# Wigner negativity
# ---------------------------------------------------------------------------

def _wigner_window(alpha, nu, x_span, y_span, points):
    state = EvenCatState(alpha)
    x = np.linspace(-x_span, x_span, points) if np.isscalar(x_span) else np.linspace(*x_span, points)
    y = np.linspace(*y_span, points)
    xx, yy = np.meshgrid(x, y, indexing='ij')
    values = wigner_closed_form(state, nu, xx, yy, DampingGeometry.ISOTROPIC).total
    return x, y, values


def wigner_negativity_scan(alpha, channel, t, tol=None, points=161, refinements=3):
    """
    Minimum of the closed-form Wigner function at time t: a coarse grid over
    the cat followed by zoomed grids around the running minimum.
    """
    _check_alpha(alpha)
    if t < 0:
        raise ParameterError(f'Time must be nonnegative, got {t!r}')
    nu = float(channel.nu(t))
    a_u, a_v = 0.5 + nu, 0.5 + nu
    x_span = alpha + 4.0 * math.sqrt(a_v)
    y_span = (0.0, 4.0 * math.sqrt(a_u) + math.pi * a_u / alpha)
    x, y, values = _wigner_window(alpha, nu, x_span, y_span, points)
    best = float(values.min())
    for _ in range(refinements):
        i, j = np.unravel_index(int(np.argmin(values)), values.shape)
        dx = 2.0 * (x[1] - x[0])
        dy = 2.0 * (y[1] - y[0])
        x, y, values = _wigner_window(
            alpha, nu, (x[i] - dx, x[i] + dx), (max(0.0, y[j] - dy), y[j] + dy), 41,
        )
        best = min(best, float(values.min()))
    return best


def wigner_maximum(alpha, nu):
    """Height of the coherent peaks, the largest value of the damped cat's W"""
    state = EvenCatState(alpha)
    return float(wigner_closed_form(state, nu, alpha, 0.0, DampingGeometry.ISOTROPIC).total)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

def indicator_times(alpha, channel, tol=None):
    """All five clocks for one cat amplitude and one channel"""
    _check_alpha(alpha)
    return IndicatorTimes(
        channel=channel.label,
        alpha=float(alpha),
        tau_dec=tau_dec(alpha, channel),
        tau_p=tau_p(channel),
        tau_w=tau_w(channel),
        tau_v=tau_v(alpha, channel),
        tau_k=tau_k(alpha, channel, tol),
    )
