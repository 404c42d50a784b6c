"""
s-ordered characteristic functions, quasiprobability distributions and
density-matrix reconstruction.

Conventions: chi(xi, s) = Tr[rho D(xi)] exp(s |xi|^2 / 2) with xi = u + iv,
rho = (1/pi) int d^2 xi chi(xi, 0) D(-xi), and
W(beta, s) = (1/pi^2) int d^2 xi exp(beta xi* - beta* xi) chi(xi, s).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from scipy.special import gammaln

from .exceptions import ConvergenceError, DivergentOrder, ParameterError
from .numerics import (
    Tolerance, integrate_2d, laguerre_assoc_table, polar_quadrature, radial_rule,
    truncation_radius,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SOrder:
    """Ordering parameter: 1 normal (P), 0 symmetric (W), -1 antinormal (Q)"""
    s: float

    def __post_init__(self):
        if not -1.0 <= self.s <= 1.0:
            raise ParameterError(f'Ordering parameter must lie in [-1, 1], got {self.s!r}')

    @classmethod
    def coerce(cls, value):
        return value if isinstance(value, SOrder) else cls(float(value))

    def __float__(self):
        return float(self.s)


NORMAL = SOrder(1.0)
SYMMETRIC = SOrder(0.0)
ANTINORMAL = SOrder(-1.0)


@dataclass(frozen=True)
class CharFn:
    """
    A characteristic function at one ordering.

    ``func(u, v)`` must accept arrays. ``width`` and ``shift`` describe the
    envelope: |chi| <= exp(-width |xi|^2 + 2 shift |xi|) up to a constant.
    """
    func: Callable
    order: SOrder = SYMMETRIC
    width: float = 0.5
    shift: float = 0.0
    label: str = ''

    def __call__(self, u, v):
        return self.func(u, v)

    def eval(self, u, v, s=None):
        """chi at (u, v), converted to ordering s when one is given"""
        if s is None:
            return self.func(u, v)
        return convert_order(self, self.order, s).func(u, v)

    @property
    def frontier(self):
        """Orders s at or above this value make chi non-integrable"""
        return self.order.s + 2.0 * self.width

    def radius(self):
        if self.width <= 0:
            raise DivergentOrder(f'Characteristic function {self.label!r} is not integrable')
        return truncation_radius(self.width, self.shift)


def convert_order(chi, from_order, to_order):
    """chi(xi, to) = chi(xi, from) exp((to - from) |xi|^2 / 2)"""
    from_order, to_order = SOrder.coerce(from_order), SOrder.coerce(to_order)
    if from_order != chi.order:
        raise ParameterError(
            f'Characteristic function is at order {chi.order.s}, not {from_order.s}'
        )
    delta = to_order.s - from_order.s
    if delta == 0:
        return chi
    base = chi.func

    def converted(u, v):
        return base(u, v) * np.exp(0.5 * delta * (np.square(u) + np.square(v)))

    return CharFn(
        func=converted, order=to_order, width=chi.width - 0.5 * delta,
        shift=chi.shift, label=chi.label,
    )


# ---------------------------------------------------------------------------
# Phase-space grids
# ---------------------------------------------------------------------------

@dataclass
class PhaseGrid:
    """Rectangular grid over beta = re + i im; values[i, j] sits at (re_i, im_j)"""
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    n_re: int
    n_im: int
    values: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.n_re < 2 or self.n_im < 2:
            raise ParameterError('A phase grid needs at least 2 points per axis')
        bounds = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(math.isfinite(b) for b in bounds):
            raise ParameterError(f'Phase grid bounds must be finite: {bounds}')
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ParameterError(f'Phase grid bounds must be increasing: {bounds}')
        if self.values is None:
            self.values = np.zeros((self.n_re, self.n_im))

    @classmethod
    def centered(cls, alpha, nu, points=201):
        """+-(alpha + 5) along Re beta, +-5 sqrt(nu + 1/2) along Im beta"""
        if not nu >= 0:
            raise ParameterError(f'Damping exponent must be nonnegative, got {nu!r}')
        re_span = alpha + 5.0
        im_span = 5.0 * math.sqrt(nu + 0.5)
        return cls(-re_span, re_span, -im_span, im_span, points, points)

    @property
    def re_axis(self):
        return np.linspace(self.re_min, self.re_max, self.n_re)

    @property
    def im_axis(self):
        return np.linspace(self.im_min, self.im_max, self.n_im)

    def mesh(self):
        return np.meshgrid(self.re_axis, self.im_axis, indexing='ij')

    def integral(self):
        """Trapezoid estimate of the integral of the values over the grid"""
        return float(trapezoid(trapezoid(self.values, self.im_axis, axis=1), self.re_axis))

    def to_frame(self):
        re, im = self.mesh()
        return pd.DataFrame({
            're_beta': re.ravel(),
            'im_beta': im.ravel(),
            'value': np.asarray(self.values, dtype=float).ravel(),
        })


def write_grid_csv(grid, stream, echo):
    from .utils import write_frame

    write_frame(grid.to_frame(), stream, echo, float_format='%.17g')


def quasiprob(chi, s, grid, tol=None):
    """
    Fill ``grid`` with W(beta, s), one polar quadrature per grid point.
    """
    tol = tol or Tolerance.default()
    order = SOrder.coerce(s)
    if order.s >= chi.frontier:
        raise DivergentOrder(
            f'Order s={order.s} is at or beyond the integrability frontier {chi.frontier:.6g}'
        )
    ordered = convert_order(chi, chi.order, order)
    radius = ordered.radius()
    re, im = grid.mesh()
    values = np.empty(re.shape)
    for index in np.ndindex(re.shape):
        x, y = re[index], im[index]

        def integrand(u, v, x=x, y=y):
            return np.real(np.exp(2j * (y * u - x * v)) * ordered.func(u, v))

        values[index] = integrate_2d(integrand, radius, tol, decay=ordered.width) / np.pi ** 2
    grid.values = values
    return grid


# ---------------------------------------------------------------------------
# Density matrices
# ---------------------------------------------------------------------------

@dataclass
class FockMatrix:
    """Density matrix truncated to Fock states 0..cutoff"""
    cutoff: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        expected = (self.cutoff + 1, self.cutoff + 1)
        if self.cutoff < 0 or self.entries.shape != expected:
            raise ParameterError(f'Fock matrix must be {expected}, got {self.entries.shape}')

    @classmethod
    def vacuum(cls, cutoff):
        entries = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        entries[0, 0] = 1.0
        return cls(cutoff, entries)

    @classmethod
    def from_ket(cls, amplitudes):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        return cls(len(amplitudes) - 1, np.outer(amplitudes, amplitudes.conj()))

    def trace(self):
        return float(np.real(np.trace(self.entries)))

    def purity(self):
        return float(np.real(np.vdot(self.entries.conj().T, self.entries)))

    def populations(self):
        return np.real(np.diagonal(self.entries)).copy()

    def hermiticity_error(self):
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def parity_coherence(self):
        """Largest |rho_mn| with m + n odd"""
        index = np.add.outer(np.arange(self.cutoff + 1), np.arange(self.cutoff + 1))
        odd = (index % 2) == 1
        return float(np.max(np.abs(self.entries[odd]))) if odd.any() else 0.0

    def trace_distance(self, other):
        if other.cutoff != self.cutoff:
            raise ParameterError('Trace distance needs matching cutoffs')
        difference = self.entries - other.entries
        difference = 0.5 * (difference + difference.conj().T)
        return float(0.5 * np.abs(np.linalg.eigvalsh(difference)).sum())


def _reconstruct(chi, cutoff, radius, n_radial, n_angular):
    r, w = radial_rule(n_radial, radius)
    theta = 2 * np.pi * np.arange(n_angular) / n_angular
    values = np.asarray(chi.func(r[:, None] * np.cos(theta), r[:, None] * np.sin(theta)), dtype=complex)
    # c_k(r) = int dtheta chi(r, theta) exp(i k theta)
    coeffs = 2 * np.pi * np.fft.ifft(values, axis=1)
    x = r ** 2
    log_r = np.log(r)
    entries = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for k in range(cutoff + 1):
        table = laguerre_assoc_table(cutoff - k, k, x)
        for n in range(cutoff - k + 1):
            m = n + k
            log_prefactor = 0.5 * (gammaln(n + 1) - gammaln(m + 1)) + k * log_r - 0.5 * x
            radial = w * r * np.exp(log_prefactor) * table[n]
            entries[m, n] = (-1) ** k * np.dot(radial, coeffs[:, k]) / np.pi
    upper = np.triu_indices(cutoff + 1, 1)
    entries[upper] = entries.T[upper].conj()
    return entries


def density_matrix_from_chi(chi, cutoff, tol=None):
    """
    rho_mn = (1/pi) int d^2 xi chi(xi, 0) <m|D(-xi)|n>, the displacement
    matrix elements written with associated Laguerre polynomials.
    """
    if cutoff < 1:
        raise ParameterError(f'Cutoff must be at least 1, got {cutoff}')
    tol = tol or Tolerance(abs=1e-10, rel=1e-10, max_evals=Tolerance.default().max_evals)
    symmetric = convert_order(chi, chi.order, SYMMETRIC)
    radius = symmetric.radius()
    n_radial = 64
    n_angular = 1 << max(7, int(math.ceil(math.log2(4 * (cutoff + 1)))))
    evaluations = 0
    previous = None
    while True:
        entries = _reconstruct(symmetric, cutoff, radius, n_radial, n_angular)
        evaluations += n_radial * n_angular
        if previous is not None:
            change = float(np.linalg.norm(entries - previous))
            logger.debug(f'density reconstruction {n_radial}x{n_angular}: change {change:.3e}')
            if change <= tol.abs:
                break
        if evaluations + 4 * n_radial * n_angular > tol.max_evals:
            raise ConvergenceError(
                f'Density reconstruction did not converge within {tol.max_evals} evaluations'
            )
        previous = entries
        n_radial *= 2
        n_angular *= 2
    rho = FockMatrix(cutoff, entries)
    if abs(rho.trace() - 1.0) > 1e-6:
        logger.warning(f'Reconstructed trace {rho.trace():.9f} at cutoff {cutoff}')
    return rho


def purity_from_chi(chi, tol=None):
    """Tr rho^2 = (1/pi) int |chi(xi, 0)|^2 d^2 xi"""
    symmetric = convert_order(chi, chi.order, SYMMETRIC)
    squared = CharFn(
        func=lambda u, v: np.abs(symmetric.func(u, v)) ** 2,
        width=2 * symmetric.width, shift=2 * symmetric.shift,
    )
    return integrate_2d(squared.func, squared.radius(), tol, decay=squared.width) / np.pi


# ---------------------------------------------------------------------------
# Photon statistics
# ---------------------------------------------------------------------------

class Probability(float):
    """A probability clamped to [0, 1] that remembers the raw quadrature value"""

    def __new__(cls, raw):
        instance = super().__new__(cls, min(1.0, max(0.0, float(raw))))
        instance.raw = float(raw)
        return instance

    def __repr__(self):
        return f'Probability({float(self)!r}, raw={self.raw!r})'


def _photon_integrals(chi, n_max, tol):
    antinormal = convert_order(chi, chi.order, ANTINORMAL)

    def integrand(u, v):
        table = laguerre_assoc_table(n_max, 0, np.square(u) + np.square(v))
        return np.real(antinormal.func(u, v))[None, ...] * table

    report = polar_quadrature(integrand, antinormal.radius(), tol, decay=antinormal.width)
    return np.real(report.value) / np.pi


def _as_probability(raw, n, tol):
    if raw < -tol.abs or raw > 1.0 + tol.abs:
        logger.warning(f'p({n}) = {raw:.3e} lies outside [0, 1] beyond tolerance; clamping')
    return Probability(raw)


def photon_pmf(chi, n, tol=None):
    """p(n) = (1/pi) int d^2 xi chi(xi, 1) exp(-|xi|^2) L_n(|xi|^2)"""
    if n < 0:
        raise ParameterError(f'Photon number must be nonnegative, got {n}')
    tol = tol or Tolerance.default()
    raw = _photon_integrals(chi, n, tol)[n]
    return _as_probability(raw, n, tol)


def photon_distribution(chi, n_max, tol=None):
    """p(0) .. p(n_max) from one shared quadrature"""
    if n_max < 0:
        raise ParameterError(f'Photon number must be nonnegative, got {n_max}')
    tol = tol or Tolerance.default()
    raw = _photon_integrals(chi, n_max, tol)
    return [_as_probability(value, n, tol) for n, value in enumerate(raw)]
