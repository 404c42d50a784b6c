"""
The even coherent ("Schrödinger cat") state |alpha> + |-alpha>, alpha real.

Closed forms under Gaussian damping: the s-ordered characteristic function,
the Wigner function split into its two coherent peaks and the interference
term, the fringe visibility, and the photon-number distribution at t = 0.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .channels import DampingGeometry
from .exceptions import ParameterError
from .phase_space import SYMMETRIC, CharFn, FockMatrix, SOrder


@dataclass(frozen=True)
class EvenCatState:
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ParameterError(f'Cat amplitude must be real, finite and >= 0, got {self.alpha!r}')

    @property
    def overlap(self):
        """exp(-2 alpha^2) = <alpha|-alpha>"""
        return math.exp(-2.0 * self.alpha ** 2)

    @property
    def norm(self):
        return 2.0 * (1.0 + self.overlap)

    def size(self, zero_point_width):
        """Delta x = 2 alpha Delta x_0"""
        return 2.0 * self.alpha * zero_point_width

    def characteristic(self, nu=0.0, geometry=DampingGeometry.ISOTROPIC):
        """Symmetrically ordered chi of the damped cat as a CharFn"""
        geometry = DampingGeometry(geometry)
        c_u, c_v = geometry.coefficients

        def func(u, v):
            return even_cat_chi(self, nu, SYMMETRIC, u, v, geometry)

        return CharFn(
            func=func, order=SYMMETRIC, width=0.5 + min(c_u, c_v) * nu,
            shift=self.alpha, label=f'even cat alpha={self.alpha:g} nu={nu:g}',
        )

    def fock_amplitudes(self, cutoff):
        """<n|psi> for n = 0..cutoff, exact normalisation"""
        n = np.arange(cutoff + 1)
        amplitudes = np.zeros(cutoff + 1)
        even = n % 2 == 0
        if self.alpha == 0:
            amplitudes[0] = 1.0
            return amplitudes
        log_magnitude = (
            -0.5 * self.alpha ** 2 + n * math.log(self.alpha) - 0.5 * gammaln(n + 1)
            + math.log(2.0) - 0.5 * math.log(self.norm)
        )
        amplitudes[even] = np.exp(log_magnitude[even])
        return amplitudes

    def density_matrix(self, cutoff):
        return FockMatrix.from_ket(self.fock_amplitudes(cutoff))


@dataclass(frozen=True)
class WignerComponents:
    """W^{+alpha}, W^{-alpha} and the interference term at one or more points"""
    w_plus: object
    w_minus: object
    w_interf: object

    @property
    def total(self):
        return self.w_plus + self.w_minus + self.w_interf


def even_cat_chi(state, nu, s, u, v, geometry=DampingGeometry.ISOTROPIC):
    """
    chi(u, v, s) of the damped even cat:

        exp((s - 1)|xi|^2 / 2 - nu q(u, v)) [cos(2 alpha v) + exp(-2 alpha^2) cosh(2 alpha u)] / (1 + exp(-2 alpha^2))

    with q = u^2 + v^2 (isotropic) or 2 u^2 (position).
    """
    if nu < 0:
        raise ParameterError(f'Damping exponent must be nonnegative, got {nu!r}')
    s = float(SOrder.coerce(s))
    alpha = state.alpha
    c_u, c_v = DampingGeometry(geometry).coefficients
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u2, v2 = np.square(u), np.square(v)
    gauss = 0.5 * (s - 1.0) * (u2 + v2) - nu * (c_u * u2 + c_v * v2)
    # exp(-2 alpha^2) cosh(2 alpha u), merged into the Gaussian exponent
    stretch = 2.0 * alpha * np.abs(u)
    bump = 0.5 * (np.exp(gauss + stretch - 2.0 * alpha ** 2) + np.exp(gauss - stretch - 2.0 * alpha ** 2))
    result = (np.exp(gauss) * np.cos(2.0 * alpha * v) + bump) / (1.0 + state.overlap)
    return float(result) if result.ndim == 0 else result


def _damped_widths(nu, geometry):
    c_u, c_v = DampingGeometry(geometry).coefficients
    return 0.5 + c_u * nu, 0.5 + c_v * nu


def wigner_closed_form(state, N, re_beta, im_beta, geometry=DampingGeometry.ISOTROPIC):
    """
    Closed-form Wigner components of the damped cat at beta = re_beta + i im_beta.

    With a_u = 1/2 + c_u N, a_v = 1/2 + c_v N and C = 1 / (1 + exp(-2 alpha^2)):

        W^{+-} = C / (2 pi sqrt(a_u a_v)) exp(-y^2 / a_u - (x -+ alpha)^2 / a_v)
        W_I    = C / (pi sqrt(a_u a_v)) exp(-2 alpha^2 + alpha^2 / a_u) cos(2 alpha y / a_u) exp(-y^2 / a_u - x^2 / a_v)
    """
    if N < 0:
        raise ParameterError(f'Damping exponent must be nonnegative, got {N!r}')
    alpha = state.alpha
    a_u, a_v = _damped_widths(N, geometry)
    x = np.asarray(re_beta, dtype=float)
    y = np.asarray(im_beta, dtype=float)
    scale = 1.0 / ((1.0 + state.overlap) * np.pi * math.sqrt(a_u * a_v))
    envelope = np.exp(-np.square(y) / a_u)
    w_plus = 0.5 * scale * envelope * np.exp(-np.square(x - alpha) / a_v)
    w_minus = 0.5 * scale * envelope * np.exp(-np.square(x + alpha) / a_v)
    w_interf = (
        scale * math.exp(-2.0 * alpha ** 2 + alpha ** 2 / a_u)
        * np.cos(2.0 * alpha * y / a_u) * envelope * np.exp(-np.square(x) / a_v)
    )
    return WignerComponents(w_plus=w_plus, w_minus=w_minus, w_interf=w_interf)


def fringe_visibility(state, N, geometry=DampingGeometry.POSITION):
    """
    F = exp[-2 alpha^2 (1 - 1 / (1 + 2 c_u N))]; for position damping
    (c_u = 2) this is exp[-2 alpha^2 (1 - 1 / (1 + 4 N))].
    """
    if N < 0:
        raise ParameterError(f'Damping exponent must be nonnegative, got {N!r}')
    c_u, _ = DampingGeometry(geometry).coefficients
    spread = 2.0 * c_u * N
    return math.exp(-2.0 * state.alpha ** 2 * spread / (1.0 + spread))


def fringe_from_components(state, N, geometry=DampingGeometry.POSITION):
    """Peak ratio W_I(0) / (2 sqrt(W^{+alpha}(alpha) W^{-alpha}(-alpha)))"""
    alpha = state.alpha
    at_origin = wigner_closed_form(state, N, 0.0, 0.0, geometry)
    at_plus = wigner_closed_form(state, N, alpha, 0.0, geometry)
    at_minus = wigner_closed_form(state, N, -alpha, 0.0, geometry)
    return float(at_origin.w_interf / (2.0 * np.sqrt(at_plus.w_plus * at_minus.w_minus)))


def cat_pmf_exact(state, n):
    """
    p(n) = (1 + (-1)^n)^2 exp(-alpha^2) alpha^(2n) / (n! 2 (1 + exp(-2 alpha^2)))
    """
    if n < 0:
        raise ParameterError(f'Photon number must be nonnegative, got {n}')
    if n % 2:
        return 0.0
    if state.alpha == 0:
        return 1.0 if n == 0 else 0.0
    alpha = state.alpha
    log_p = (
        math.log(2.0) - alpha ** 2 + 2 * n * math.log(alpha) - gammaln(n + 1)
        - math.log1p(state.overlap)
    )
    return math.exp(log_p)
