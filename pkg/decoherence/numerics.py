"""
Numerical building blocks: Laguerre polynomials, the real Lambert W function,
polar quadrature for Gaussian-damped phase-space integrands, bracketed root
finding, bounded maximisation and the truncated Fock-basis integrator.

Everything here is a pure function of its inputs.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, minimize_scalar

from .exceptions import (
    ConvergenceError, CutoffError, DomainError, NoSignChange, ParameterError,
)
from .utils import get_setting

logger = logging.getLogger(__name__)

INV_E = math.exp(-1.0)


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative accuracy target plus an evaluation budget"""
    abs: float
    rel: float
    max_evals: int

    def __post_init__(self):
        if not (self.abs > 0 and self.rel > 0 and self.max_evals > 0):
            raise ParameterError(f'Tolerance entries must be positive: {self}')

    @classmethod
    def default(cls):
        """Quadrature tolerance from settings.DECOHERENCE"""
        return cls(
            abs=get_setting('QUAD_ABS_TOL'),
            rel=get_setting('QUAD_REL_TOL'),
            max_evals=int(get_setting('QUAD_MAX_EVALS')),
        )

    @classmethod
    def for_roots(cls):
        """Root-finding tolerance from settings.DECOHERENCE"""
        return cls(
            abs=get_setting('ROOT_ABS_TOL'),
            rel=get_setting('ROOT_REL_TOL'),
            max_evals=int(get_setting('ROOT_MAX_EVALS')),
        )

    def tightened(self, factor=10.0):
        return Tolerance(abs=self.abs / factor, rel=self.rel / factor, max_evals=self.max_evals)


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ParameterError(f'Bracket needs lo < hi, got [{self.lo}, {self.hi}]')

    @property
    def width(self):
        return self.hi - self.lo


# ---------------------------------------------------------------------------
# Laguerre polynomials
# ---------------------------------------------------------------------------

def laguerre(n, x):
    """L_n(x) by the three-term recurrence; x may be an array"""
    return laguerre_assoc(n, 0, x)


def laguerre_assoc(n, k, x):
    """Generalized Laguerre L_n^{(k)}(x) by upward recurrence in n"""
    if n < 0 or k < 0:
        raise ParameterError(f'Laguerre indices must be nonnegative, got n={n}, k={k}')
    return laguerre_assoc_table(n, k, x)[n]


def laguerre_assoc_table(n_max, k, x):
    """
    All of L_0^{(k)}(x) .. L_{n_max}^{(k)}(x), stacked along the first axis.
    """
    x = np.asarray(x, dtype=float)
    table = np.empty((n_max + 1,) + x.shape)
    table[0] = 1.0
    if n_max >= 1:
        table[1] = 1.0 + k - x
    for j in range(1, n_max):
        table[j + 1] = ((2 * j + 1 + k - x) * table[j] - (j + k) * table[j - 1]) / (j + 1)
    return table


# ---------------------------------------------------------------------------
# Lambert W
# ---------------------------------------------------------------------------

class Branch(str, Enum):
    PRINCIPAL = 'principal'
    MINUS_ONE = 'minus_one'


# Series of W about the branch point in p = sqrt(2(e x + 1)).
_BRANCH_SERIES = (-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0, -221.0 / 8505.0)


def _branch_point_series(p):
    return sum(c * p ** i for i, c in enumerate(_BRANCH_SERIES))


def lambert_w(branch, x, branch_offset=None):
    """
    Real Lambert W: the w with w*exp(w) = x on the requested branch.

    ``branch_offset`` may carry e*x + 1 computed by the caller without
    cancellation; it sharpens results close to the branch point x = -1/e.
    """
    branch = Branch(branch)
    x = float(x)
    slack = 8 * np.finfo(float).eps
    if x < -INV_E - slack:
        raise DomainError(f'Lambert W is complex below -1/e, got x={x!r}')
    if branch is Branch.MINUS_ONE and x >= 0:
        raise DomainError(f'Branch minus_one needs -1/e <= x < 0, got x={x!r}')
    if x == 0.0:
        return 0.0

    offset = math.e * x + 1.0 if branch_offset is None else float(branch_offset)
    if offset <= 0.0:
        return -1.0
    p = math.sqrt(2.0 * offset)
    sign = 1.0 if branch is Branch.PRINCIPAL else -1.0
    if p < 1e-3:
        return _branch_point_series(sign * p)

    if branch is Branch.PRINCIPAL:
        if x < -0.25:
            w = _branch_point_series(p)
        elif x < 3.0:
            w = math.log1p(x)
        else:
            l1 = math.log(x)
            l2 = math.log(l1)
            w = l1 - l2 + l2 / l1
        if x > 1e2:
            return _log_form_newton(w, x)
    else:
        if x < -0.25:
            w = _branch_point_series(-p)
        else:
            l1 = math.log(-x)
            l2 = math.log(-l1)
            w = l1 - l2 + l2 / l1
        if x > -1e-3:
            return _log_form_newton(w, x)
    return _halley(w, x)


def _halley(w, x, max_iter=50):
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) <= 4 * np.finfo(float).eps * (1.0 + abs(w)):
            break
    return w


def _log_form_newton(w, x, max_iter=50):
    # w + log|w| = log|x| avoids overflow/underflow of exp(w) far from the origin
    target = math.log(abs(x))
    for _ in range(max_iter):
        g = w + math.log(abs(w)) - target
        step = g / (1.0 + 1.0 / w)
        w -= step
        if abs(step) <= 4 * np.finfo(float).eps * abs(w):
            break
    return w


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureReport:
    value: object
    error: float
    tail_bound: float
    evaluations: int


@lru_cache(maxsize=64)
def _legendre_rule(n):
    return np.polynomial.legendre.leggauss(n)


def radial_rule(n, radius):
    """Gauss-Legendre nodes and weights on [0, radius]"""
    x, w = _legendre_rule(n)
    return 0.5 * radius * (x + 1.0), 0.5 * radius * w


def truncation_radius(damping, shift=0.0):
    """
    Radius beyond which exp(-damping r^2 + 2 shift r) is negligible, clipped to [8, 40]
    """
    if damping <= 0:
        raise ParameterError(f'Gaussian damping must be positive, got {damping!r}')
    radius = shift / damping + 8.0 / math.sqrt(damping)
    return float(min(40.0, max(8.0, radius)))


def _polar_sum(f, radius, n_radial, n_angular):
    r, w = radial_rule(n_radial, radius)
    theta = 2 * np.pi * np.arange(n_angular) / n_angular
    u = r[:, None] * np.cos(theta)[None, :]
    v = r[:, None] * np.sin(theta)[None, :]
    values = np.asarray(f(u, v))
    radial_weights = (w * r)[:, None]
    return (values * radial_weights).sum(axis=(-2, -1)) * (2 * np.pi / n_angular)


def _tail_bound(f, radius, decay, n_angular=256):
    theta = 2 * np.pi * np.arange(n_angular) / n_angular
    ring = np.abs(np.asarray(f(radius * np.cos(theta), radius * np.sin(theta))))
    return float(np.pi * np.max(ring.mean(axis=-1)) / decay)


def polar_quadrature(f, truncation_radius, tol=None, decay=None, min_nodes=64):
    """
    Integrate f(u, v) over the disk of the given radius.

    Gauss-Legendre in r times the periodic trapezoid rule in angle, both
    doubled until successive results agree. ``f`` is called on 2-d arrays and
    may return extra leading axes, which are integrated component-wise.
    """
    tol = tol or Tolerance.default()
    radius = float(truncation_radius)
    if radius <= 0:
        raise ParameterError(f'Truncation radius must be positive, got {radius!r}')
    decay = decay if decay else (8.0 / radius) ** 2

    n_radial, n_angular = min_nodes, 2 * min_nodes
    evaluations = 0
    previous = None
    while True:
        value = _polar_sum(f, radius, n_radial, n_angular)
        evaluations += n_radial * n_angular
        if previous is not None:
            error = float(np.max(np.abs(value - previous)))
            scale = float(np.max(np.abs(value)))
            logger.debug(f'polar quadrature {n_radial}x{n_angular}: change {error:.3e}')
            if error <= max(tol.abs, tol.rel * scale):
                break
        if evaluations + 4 * n_radial * n_angular > tol.max_evals:
            raise ConvergenceError(
                f'Quadrature did not converge within {tol.max_evals} evaluations '
                f'(radius {radius:.3g}, last grid {n_radial}x{n_angular})'
            )
        previous = value
        n_radial *= 2
        n_angular *= 2

    tail = _tail_bound(f, radius, decay)
    if tail > tol.abs:
        logger.warning(f'Quadrature tail bound {tail:.3e} exceeds tolerance at radius {radius:.3g}')
    return QuadratureReport(value=value, error=error, tail_bound=tail, evaluations=evaluations)


def integrate_2d(f, truncation_radius, tol=None, decay=None):
    """Scalar integral of a Gaussian-damped f(u, v) over the plane"""
    report = polar_quadrature(f, truncation_radius, tol=tol, decay=decay)
    return float(np.real(report.value))


# ---------------------------------------------------------------------------
# Roots and maxima
# ---------------------------------------------------------------------------

def find_root(f, bracket, tol=None):
    """
    Brent's method (bisection safeguarded by secant and inverse quadratic steps).
    """
    tol = tol or Tolerance.for_roots()
    f_lo, f_hi = f(bracket.lo), f(bracket.hi)
    if f_lo == 0:
        return float(bracket.lo)
    if f_hi == 0:
        return float(bracket.hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoSignChange(
            f'No sign change on [{bracket.lo:.6g}, {bracket.hi:.6g}]: '
            f'f(lo)={f_lo:.3e}, f(hi)={f_hi:.3e}'
        )
    try:
        root = brentq(
            f, bracket.lo, bracket.hi,
            xtol=tol.abs, rtol=max(tol.rel, 4 * np.finfo(float).eps), maxiter=tol.max_evals,
        )
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc
    return float(root)


def maximize_1d(f, bracket, tol=None, seeds=128):
    """
    Best maximum of f on the bracket: a uniform seeding grid followed by
    bounded golden-section/parabolic refinement around the best seed.
    """
    tol = tol or Tolerance.for_roots()
    grid = np.linspace(bracket.lo, bracket.hi, seeds + 1)
    values = np.array([f(x) for x in grid], dtype=float)
    best = int(np.nanargmax(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, seeds)]
    result = minimize_scalar(
        lambda x: -f(x), bounds=(lo, hi), method='bounded',
        options={'xatol': max(tol.abs, 1e-10 * max(1.0, bracket.width)), 'maxiter': 500},
    )
    if result.success and -result.fun >= values[best]:
        return float(result.x), float(-result.fun)
    return float(grid[best]), float(values[best])


# ---------------------------------------------------------------------------
# Truncated Fock-basis integration
# ---------------------------------------------------------------------------

BOUNDARY_POPULATION_LIMIT = 1e-6


def evolve_fock(generator, rho0, t_final, steps_hint=100, tol=None, t_start=0.0):
    """
    Integrate d(rho)/dt = generator(rho, t) from t_start to t_final.

    ``rho0`` is a FockMatrix; ``generator`` acts on its ``entries`` array. An
    adaptive DOP853 pair does the stepping; the top two Fock populations are
    checked at ``steps_hint`` snapshots and CutoffError is raised once they
    exceed 1e-6.
    """
    if t_final < t_start:
        raise ParameterError(f'Cannot integrate backwards from {t_start} to {t_final}')
    entries = np.asarray(rho0.entries, dtype=complex)
    if t_final == t_start:
        return dataclasses.replace(rho0, entries=entries.copy())

    dim = entries.shape[0]
    rtol = tol.rel if tol else get_setting('ODE_RTOL')
    atol = tol.abs if tol else get_setting('ODE_ATOL')

    def rhs(t, y):
        return np.asarray(generator(y.reshape(dim, dim), t), dtype=complex).ravel()

    snapshots = np.linspace(t_start, t_final, max(int(steps_hint), 1) + 1)
    solution = solve_ivp(
        rhs, (t_start, t_final), entries.ravel(), method='DOP853',
        t_eval=snapshots, rtol=rtol, atol=atol,
    )
    if not solution.success:
        raise ConvergenceError(f'Fock integration failed: {solution.message}')

    states = solution.y.T.reshape(-1, dim, dim)
    edge = np.abs(np.real(np.diagonal(states, axis1=1, axis2=2)[:, -2:])).max(axis=1)
    if np.any(edge > BOUNDARY_POPULATION_LIMIT):
        when = solution.t[int(np.argmax(edge > BOUNDARY_POPULATION_LIMIT))]
        raise CutoffError(
            f'Boundary populations reach {edge.max():.2e} at t={when:.4g}; '
            f'increase the cutoff beyond {dim - 1}'
        )
    logger.debug(f'Fock integration {t_start:.4g} -> {t_final:.4g}: {solution.nfev} rhs calls')
    return dataclasses.replace(rho0, entries=states[-1])
