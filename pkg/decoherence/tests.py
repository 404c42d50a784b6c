"""
Test suite for the decoherence app
"""
import math
import os
import tempfile
from io import StringIO

import numpy as np
import pandas as pd
from django.apps import apps as django_apps
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from scipy.special import lambertw
from scipy.stats import geom, poisson

from .channels import (
    ClassicalNoiseChannel, DampingGeometry, DilationChannel, NoiseParams, PhysicalParams,
    brukner_tau_bar, brukner_visibility, brukner_visibility_gaussian, delta_e_thermal, kappa,
    observer_dilation_excess, observer_dilation_factor, observer_frame_time, schwarzschild_radius,
    sigma_detuned, sigma_general, sigma_resonant, t_w_classical_closed,
)
from .constants import EARTH_MASS, EARTH_RADIUS, HBAR
from .exceptions import (
    CutoffError, DivergentOrder, DomainError, InsideHorizon, MissingParam, NoSignChange,
    ParameterError,
)
from .experiments import (
    RateUnits, SweepSpec, consistency_report, indicator_thresholds, ratio_contour, sweep_alpha,
    sweep_noise, unity_diagonal,
)
from .fock_oracle import (
    cutoff_converged, default_cutoff, dilation_generator, purity_trajectory, run_validation,
)
from .indicators import (
    IndicatorTimes, indicator_times, klyshko_B, klyshko_series, klyshko_threshold,
    nonclassical_depth, tau_dec_dilation, tau_k, tau_p, tau_v, tau_w, vogel_threshold,
    vogel_witness, wigner_maximum, wigner_negativity_scan,
)
from .numerics import (
    Bracket, Branch, Tolerance, evolve_fock, find_root, integrate_2d, laguerre, laguerre_assoc,
    lambert_w, maximize_1d,
)
from .phase_space import (
    ANTINORMAL, NORMAL, CharFn, FockMatrix, PhaseGrid, convert_order, density_matrix_from_chi,
    photon_distribution, photon_pmf, purity_from_chi, quasiprob,
)
from .states import (
    EvenCatState, cat_pmf_exact, even_cat_chi, fringe_from_components, fringe_visibility,
    wigner_closed_form,
)
from .utils import csv_header, parse_decades, validate_required_fields


def vacuum_chi():
    return CharFn(func=lambda u, v: np.exp(-0.5 * (np.square(u) + np.square(v))), label='vacuum')


def read_output(text):
    return pd.read_csv(StringIO(text), comment='#')


# Analytic even-cat photon statistics at alpha = 1
CAT_P0 = 2.0 * math.exp(-1.0) / (1.0 + math.exp(-2.0))
CAT_P2 = 0.5 * CAT_P0


class NumericsTests(SimpleTestCase):
    """Test cases for the numerical building blocks"""

    def test_laguerre_closed_forms(self):
        """Test Laguerre polynomials against their explicit forms"""
        self.assertEqual(laguerre(0, 3.7), 1.0)
        self.assertAlmostEqual(laguerre(1, 2.0), -1.0, delta=1e-13)
        self.assertAlmostEqual(laguerre(2, 1.0), -0.5, delta=1e-13)
        closed = {
            3: lambda x: (-x ** 3 + 9 * x ** 2 - 18 * x + 6) / 6,
            4: lambda x: (x ** 4 - 16 * x ** 3 + 72 * x ** 2 - 96 * x + 24) / 24,
        }
        for n, form in closed.items():
            for x in (0.0, 1.0, 2.0):
                self.assertAlmostEqual(laguerre(n, x), form(x), delta=1e-13)

    def test_associated_laguerre(self):
        """Test generalized Laguerre polynomials"""
        self.assertEqual(laguerre_assoc(0, 5, 1.2), 1.0)
        self.assertAlmostEqual(laguerre_assoc(1, 1, 0.0), 2.0, delta=1e-13)
        # (k+1)(k+2)/2 - (k+2)x + x^2/2 at k = 1, x = 1
        self.assertAlmostEqual(laguerre_assoc(2, 1, 1.0), 0.5, delta=1e-13)
        with self.assertRaises(ParameterError):
            laguerre_assoc(-1, 0, 1.0)

    def test_lambert_w_special_values(self):
        """Test Lambert W at its textbook points"""
        self.assertEqual(lambert_w(Branch.PRINCIPAL, 0.0), 0.0)
        self.assertAlmostEqual(lambert_w('principal', math.e), 1.0, delta=1e-14)
        self.assertAlmostEqual(lambert_w('minus_one', -math.exp(-1.0)), -1.0, delta=1e-6)

    def test_lambert_w_matches_scipy(self):
        """Test both real branches against scipy.special.lambertw"""
        for x in (-0.3678, -0.3, -0.1, -1e-3, 0.5, 2.0, 10.0, 1e3, 1e8):
            expected = lambertw(x, 0).real
            self.assertAlmostEqual(lambert_w('principal', x), expected, delta=1e-12 * max(1.0, abs(expected)))
        for x in (-0.3678, -0.3, -0.1, -1e-3, -1e-8):
            expected = lambertw(x, -1).real
            self.assertAlmostEqual(lambert_w('minus_one', x), expected, delta=1e-12 * max(1.0, abs(expected)))

    def test_lambert_w_near_branch_point(self):
        """Test the branch-point series with a caller-supplied offset"""
        for q in (1e-9, 1e-7, 1e-5):
            x = -math.exp(-1.0 - q)
            offset = -math.expm1(-q)
            for branch in Branch:
                w = lambert_w(branch, x, branch_offset=offset)
                self.assertAlmostEqual(w * math.exp(w), x, delta=1e-15)

    def test_lambert_w_domain(self):
        """Test that complex-valued inputs are rejected"""
        with self.assertRaises(DomainError):
            lambert_w('principal', -0.5)
        with self.assertRaises(DomainError):
            lambert_w('minus_one', 0.1)

    def test_integrate_2d(self):
        """Test polar quadrature on Gaussian integrands"""
        gauss = integrate_2d(lambda u, v: np.exp(-u ** 2 - v ** 2), 12.0, decay=1.0)
        self.assertAlmostEqual(gauss, math.pi, delta=1e-10)
        weighted = integrate_2d(
            lambda u, v: np.exp(-u ** 2 - v ** 2) * laguerre(1, u ** 2 + v ** 2), 12.0, decay=1.0,
        )
        self.assertAlmostEqual(weighted, 0.0, delta=1e-10)
        odd = integrate_2d(lambda u, v: u * np.exp(-u ** 2 - v ** 2), 7.0, decay=1.0)
        self.assertAlmostEqual(odd, 0.0, delta=1e-12)

    def test_find_root(self):
        """Test Brent root finding and bracket validation"""
        self.assertAlmostEqual(find_root(lambda t: t - 1.0, Bracket(0.0, 2.0)), 1.0, delta=1e-13)
        self.assertAlmostEqual(find_root(lambda t: t * t - 2.0, Bracket(1.0, 2.0)), math.sqrt(2.0), delta=1e-13)
        with self.assertRaises(NoSignChange):
            find_root(lambda t: t * t + 1.0, Bracket(-1.0, 1.0))
        with self.assertRaises(ParameterError):
            Bracket(1.0, 1.0)

    def test_find_root_matches_closed_form_t_w(self):
        """Test the root of sigma = 1/2 against the Lambert W closed form"""
        noise = NoiseParams(coupling=1.0, gamma=1.0)
        root = find_root(lambda t: sigma_resonant(noise, t) - 0.5, Bracket(0.0, 5.0))
        self.assertAlmostEqual(root / t_w_classical_closed(noise), 1.0, delta=1e-9)

    def test_maximize_1d(self):
        """Test bounded maximisation"""
        arg, value = maximize_1d(lambda u: -(u - 1.0) ** 2, Bracket(0.0, 2.0))
        self.assertAlmostEqual(arg, 1.0, delta=1e-6)
        self.assertAlmostEqual(value, 0.0, delta=1e-12)
        _, value = maximize_1d(lambda u: math.cosh(2 * u) * math.exp(-u * u), Bracket(0.0, 6.0))
        self.assertGreaterEqual(value, 1.0)
        cat = EvenCatState(1.0)
        arg, value = maximize_1d(lambda u: even_cat_chi(cat, 0.0, 1.0, u, 0.0) - 1.0, Bracket(0.0, 10.0))
        self.assertGreater(arg, 0.0)
        self.assertGreater(value, 0.0)

    def test_tolerance_validation(self):
        """Test that tolerances must be positive"""
        with self.assertRaises(ParameterError):
            Tolerance(abs=0.0, rel=1e-6, max_evals=10)
        tight = Tolerance.default().tightened()
        self.assertLess(tight.abs, Tolerance.default().abs)

    def test_evolve_fock_zero_generator(self):
        """Test that a vanishing generator leaves the state unchanged"""
        rho0 = EvenCatState(1.0).density_matrix(12)
        rho = evolve_fock(lambda rho, t: np.zeros_like(rho), rho0, 1.0)
        self.assertLess(np.max(np.abs(rho.entries - rho0.entries)), 1e-14)

    def test_evolve_fock_preserves_trace(self):
        """Test trace preservation of the double-commutator generator"""
        rho = evolve_fock(dilation_generator(1.0, 20), FockMatrix.vacuum(20), 0.5)
        self.assertAlmostEqual(rho.trace(), 1.0, delta=1e-10)
        self.assertLess(rho.hermiticity_error(), 1e-12)

    def test_evolve_fock_detects_small_cutoff(self):
        """Test that populations at the cutoff raise CutoffError"""
        with self.assertRaises(CutoffError):
            evolve_fock(dilation_generator(1.0, 4), EvenCatState(2.0).density_matrix(4), 0.1)


class PhaseSpaceTests(SimpleTestCase):
    """Test cases for orderings, quasiprobabilities and reconstruction"""

    def test_convert_order(self):
        """Test conversion between orderings"""
        chi = vacuum_chi()
        self.assertIs(convert_order(chi, chi.order, chi.order), chi)
        normal = convert_order(chi, chi.order, NORMAL)
        self.assertAlmostEqual(float(normal(1.3, -0.4)), 1.0, delta=1e-14)
        cat = EvenCatState(1.0).characteristic()
        expected = (math.cos(2.0) + math.exp(-2.0)) / (1.0 + math.exp(-2.0))
        self.assertAlmostEqual(float(cat.eval(0.0, 1.0, NORMAL)), expected, delta=1e-14)
        with self.assertRaises(ParameterError):
            convert_order(chi, NORMAL, ANTINORMAL)

    def test_frontier(self):
        """Test the integrability frontier of a damped cat"""
        self.assertAlmostEqual(EvenCatState(1.0).characteristic(0.3).frontier, 1.6, delta=1e-14)

    def test_vacuum_wigner(self):
        """Test the vacuum Wigner function by quadrature"""
        grid = quasiprob(vacuum_chi(), 0.0, PhaseGrid(-0.5, 0.5, -0.5, 0.5, 3, 3))
        re, im = grid.mesh()
        expected = (2.0 / math.pi) * np.exp(-2.0 * (re ** 2 + im ** 2))
        self.assertAlmostEqual(grid.values[1, 1], 2.0 / math.pi, delta=1e-10)
        self.assertLess(np.max(np.abs(grid.values - expected)), 1e-10)

    def test_cat_wigner_quadrature_matches_closed_form(self):
        """Test the quadrature Wigner function against the analytic components"""
        state = EvenCatState(2.0)
        grid = quasiprob(state.characteristic(), 0.0, PhaseGrid(-0.1, 0.1, -0.1, 0.1, 3, 3))
        closed = wigner_closed_form(state, 0.0, 0.0, 0.0).total
        self.assertAlmostEqual(grid.values[1, 1], float(closed), delta=1e-8)

    def test_q_function_is_smoothed_wigner(self):
        """Test that the Q function of a damped cat is its Wigner function at nu + 1/2"""
        state = EvenCatState(1.0)
        grid = quasiprob(state.characteristic(0.2), -1.0, PhaseGrid(-1.5, 1.5, -1.0, 1.0, 3, 3))
        re, im = grid.mesh()
        smoothed = wigner_closed_form(state, 0.7, re, im).total
        self.assertLess(np.max(np.abs(grid.values - smoothed)), 1e-8)
        self.assertTrue(np.all(grid.values >= -1e-12))

    def test_divergent_order(self):
        """Test that orders beyond the frontier are rejected"""
        with self.assertRaises(DivergentOrder):
            quasiprob(EvenCatState(1.0).characteristic(), 1.0, PhaseGrid(-1, 1, -1, 1, 2, 2))

    def test_phase_grid_validation(self):
        """Test phase grid bounds checking"""
        with self.assertRaises(ParameterError):
            PhaseGrid(1.0, -1.0, -1.0, 1.0, 5, 5)
        with self.assertRaises(ParameterError):
            PhaseGrid(-1.0, 1.0, -1.0, 1.0, 1, 5)

    def test_vacuum_reconstruction(self):
        """Test density reconstruction of the vacuum"""
        rho = density_matrix_from_chi(vacuum_chi(), 4)
        self.assertAlmostEqual(rho.populations()[0], 1.0, delta=1e-9)
        self.assertLess(np.max(np.abs(rho.entries - FockMatrix.vacuum(4).entries)), 1e-9)

    def test_cat_reconstruction(self):
        """Test density reconstruction of the undamped cat"""
        state = EvenCatState(1.0)
        rho = density_matrix_from_chi(state.characteristic(), 12)
        self.assertAlmostEqual(rho.entries[0, 0].real, CAT_P0, delta=1e-9)
        self.assertAlmostEqual(abs(rho.entries[0, 1]), 0.0, delta=1e-10)
        self.assertAlmostEqual(rho.entries[1, 1].real, 0.0, delta=1e-10)
        self.assertLess(rho.trace_distance(state.density_matrix(12)), 1e-8)

    def test_purity_from_chi(self):
        """Test purity of pure and damped cats"""
        state = EvenCatState(1.0)
        self.assertAlmostEqual(purity_from_chi(state.characteristic()), 1.0, delta=1e-9)
        self.assertLess(purity_from_chi(state.characteristic(0.3)), 1.0)

    def test_photon_statistics(self):
        """Test photon-number probabilities from the characteristic function"""
        self.assertAlmostEqual(photon_pmf(vacuum_chi(), 0), 1.0, delta=1e-10)
        pmf = photon_distribution(EvenCatState(1.0).characteristic(), 4)
        self.assertAlmostEqual(pmf[0], CAT_P0, delta=1e-10)
        self.assertAlmostEqual(pmf[1].raw, 0.0, delta=1e-10)
        self.assertAlmostEqual(pmf[2], CAT_P2, delta=1e-10)
        self.assertAlmostEqual(pmf[3].raw, 0.0, delta=1e-10)
        for p in pmf:
            self.assertTrue(0.0 <= p <= 1.0)

    def test_damped_photon_statistics_normalised(self):
        """Test that the photon distribution of a damped cat sums to one"""
        for nu in (0.1, 0.3, 0.5):
            pmf = photon_distribution(EvenCatState(1.0).characteristic(nu), 20)
            self.assertAlmostEqual(sum(pmf), 1.0, delta=1e-8)
            self.assertGreater(pmf[1], 0.0)

    def test_centered_grid_rejects_negative_damping(self):
        """Test that a negative damping exponent is a parameter error"""
        with self.assertRaises(ParameterError):
            PhaseGrid.centered(1.0, -1.0)


class StateTests(SimpleTestCase):
    """Test cases for the even cat state"""

    def test_chi_normalization(self):
        """Test chi(0, 0) = 1 for any damping and ordering"""
        for alpha, nu, s in ((0.5, 0.0, 0.0), (1.0, 0.3, 1.0), (2.5, 1.2, -1.0)):
            self.assertAlmostEqual(even_cat_chi(EvenCatState(alpha), nu, s, 0.0, 0.0), 1.0, delta=1e-14)

    def test_chi_vacuum_limit(self):
        """Test the alpha = 0 cat is the vacuum"""
        u, v = 0.7, -1.1
        self.assertAlmostEqual(
            even_cat_chi(EvenCatState(0.0), 0.0, 0.0, u, v), math.exp(-0.5 * (u * u + v * v)), delta=1e-14,
        )

    def test_chi_normal_order_value(self):
        """Test chi(1, 0, s=1) of the alpha = 1 cat"""
        expected = (1.0 + math.exp(-2.0) * math.cosh(2.0)) / (1.0 + math.exp(-2.0))
        value = even_cat_chi(EvenCatState(1.0), 0.0, 1.0, 1.0, 0.0)
        self.assertAlmostEqual(value, expected, delta=1e-14)
        self.assertAlmostEqual(value, 1.32926, delta=1e-5)

    def test_negative_damping_rejected(self):
        """Test that nu < 0 is rejected"""
        with self.assertRaises(ParameterError):
            even_cat_chi(EvenCatState(1.0), -0.1, 0.0, 0.0, 0.0)
        with self.assertRaises(ParameterError):
            EvenCatState(-1.0)

    def test_wigner_components(self):
        """Test the Wigner decomposition against quadrature and its normalisation"""
        state = EvenCatState(1.0)
        closed = wigner_closed_form(state, 0.5, 0.0, 0.7).total
        grid = quasiprob(state.characteristic(0.5), 0.0, PhaseGrid(-0.1, 0.1, 0.6, 0.8, 3, 3))
        self.assertAlmostEqual(grid.values[1, 1], float(closed), delta=1e-8)

        grid = PhaseGrid.centered(1.0, 0.0)
        re, im = grid.mesh()
        grid.values = wigner_closed_form(state, 0.0, re, im).total
        self.assertAlmostEqual(grid.integral(), 1.0, delta=1e-6)

    def test_wigner_normalisation_under_damping(self):
        """Test that W integrates to one at the Wigner and depth thresholds"""
        for alpha in (1.0, 2.0):
            state = EvenCatState(alpha)
            for nu in (0.5, 1.0):
                grid = PhaseGrid.centered(alpha, nu)
                re, im = grid.mesh()
                grid.values = wigner_closed_form(state, nu, re, im).total
                self.assertAlmostEqual(grid.integral(), 1.0, delta=1e-6)

    def test_fringe_visibility(self):
        """Test the fringe visibility closed form"""
        state = EvenCatState(1.0)
        self.assertEqual(fringe_visibility(state, 0.0), 1.0)
        self.assertAlmostEqual(fringe_visibility(state, 0.25), math.exp(-1.0), delta=1e-14)
        self.assertAlmostEqual(fringe_visibility(state, 1e12), math.exp(-2.0), delta=1e-10)
        for N in (0.05, 0.25, 1.0):
            self.assertAlmostEqual(
                fringe_from_components(state, N), fringe_visibility(state, N), delta=1e-12,
            )

    def test_cat_pmf(self):
        """Test the analytic photon-number distribution"""
        self.assertEqual(cat_pmf_exact(EvenCatState(0.0), 0), 1.0)
        self.assertEqual(cat_pmf_exact(EvenCatState(1.3), 3), 0.0)
        self.assertAlmostEqual(cat_pmf_exact(EvenCatState(1.0), 0), CAT_P0, delta=1e-14)
        self.assertAlmostEqual(cat_pmf_exact(EvenCatState(1.0), 2), 0.324027, delta=1e-6)
        total = sum(cat_pmf_exact(EvenCatState(2.0), n) for n in range(80))
        self.assertAlmostEqual(total, 1.0, delta=1e-12)

    def test_fock_amplitudes(self):
        """Test the Fock expansion of the cat"""
        state = EvenCatState(1.5)
        populations = state.density_matrix(40).populations()
        self.assertAlmostEqual(populations.sum(), 1.0, delta=1e-12)
        for n in range(6):
            self.assertAlmostEqual(populations[n], cat_pmf_exact(state, n), delta=1e-14)


class ChannelTests(SimpleTestCase):
    """Test cases for the dilation and classical noise channels"""

    def test_thermal_energy_spread(self):
        """Test Delta E_0 = sqrt(N) k_B T"""
        self.assertAlmostEqual(delta_e_thermal(100, 300.0) / delta_e_thermal(1, 300.0), 10.0, delta=1e-12)
        self.assertAlmostEqual(delta_e_thermal(1e5, 300.0) / 1.3098e-18, 1.0, delta=1e-3)
        with self.assertRaises(ParameterError):
            delta_e_thermal(0.5, 300.0)

    def test_kappa(self):
        """Test kappa for the standard parameter set"""
        params = PhysicalParams.trapped_ion_defaults()
        self.assertAlmostEqual(kappa(params) / 2.297e-13, 1.0, delta=2e-3)
        self.assertEqual(kappa(params.replace(delta_e=0.0)), 0.0)

    def test_kappa_reparameterisation(self):
        """Test kappa from (mass, trap_freq) equals kappa from (Delta x, alpha)"""
        mass, trap_freq, alpha = 1e-17, 2 * math.pi * 1e3, 1.7
        width = math.sqrt(HBAR / (mass * trap_freq))
        direct = PhysicalParams(mass=mass, trap_freq=trap_freq, delta_e=1e-20, alpha=alpha)
        derived = PhysicalParams(superposition_size=2 * alpha * width, alpha=alpha, delta_e=1e-20)
        self.assertAlmostEqual(kappa(direct) / kappa(derived), 1.0, delta=1e-12)

    def test_missing_parameters(self):
        """Test MissingParam when kappa cannot be formed"""
        with self.assertRaises(MissingParam):
            kappa(PhysicalParams(delta_e=1e-20))
        with self.assertRaises(MissingParam):
            kappa(PhysicalParams(superposition_size=1e-6, alpha=1.0))

    def test_params_validation(self):
        """Test parameter checking and parameter files"""
        with self.assertRaises(ParameterError):
            PhysicalParams(temperature=-1.0)
        with self.assertRaises(ParameterError):
            PhysicalParams.from_mapping({'colour': '1'})
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'run.params')
            with open(path, 'w', encoding='utf-8') as stream:
                stream.write('alpha=2\nsuperposition_size=1e-6\n# comment\ntemperature = 300\nn_internal=1e5\n')
            params = PhysicalParams.from_file(path)
            self.assertEqual(params.alpha, 2.0)
            self.assertEqual(params.temperature, 300.0)
            with self.assertRaises(ParameterError):
                PhysicalParams.from_file(os.path.join(directory, 'missing.params'))

    def test_dilation_channel(self):
        """Test nu(t) = kappa t^2 / 2"""
        self.assertEqual(DilationChannel(2.0).nu(0.0), 0.0)
        self.assertAlmostEqual(DilationChannel(2.0).nu(1.0), 1.0, delta=1e-15)
        k = kappa(PhysicalParams.trapped_ion_defaults())
        self.assertAlmostEqual(DilationChannel(k).nu(1.0 / math.sqrt(k)), 0.5, delta=1e-14)

    def test_sigma_resonant(self):
        """Test the resonant OU exponent"""
        noise = NoiseParams(coupling=1.0, gamma=1.0)
        self.assertEqual(sigma_resonant(noise, 0.0), 0.0)
        self.assertAlmostEqual(sigma_resonant(noise, 1.0), math.exp(-1.0), delta=1e-15)
        self.assertAlmostEqual(sigma_resonant(NoiseParams(1.0, 1e8), 1.0), 1.0, delta=1e-7)
        # small gamma t uses the series; it must join the exact form smoothly
        self.assertAlmostEqual(sigma_resonant(noise, 1e-3 * (1 - 1e-9)) / sigma_resonant(noise, 1e-3), 1.0, delta=1e-8)

    def test_sigma_general(self):
        """Test the quadrature exponent against the resonant closed form"""
        noise = NoiseParams(coupling=1.0, gamma=1.0)
        self.assertEqual(sigma_general(noise, 0.0), 0.0)
        for t in (0.01, 0.1, 1.0, 10.0):
            self.assertAlmostEqual(sigma_general(noise, t) / sigma_resonant(noise, t), 1.0, delta=1e-9)
        detuned = NoiseParams(coupling=1.0, gamma=1.0, detuning=20.0)
        self.assertLess(sigma_general(detuned, 5.0), sigma_resonant(noise, 5.0))

    def test_sigma_detuned_closed_form(self):
        """Test the detuned closed form against the cosine-weighted quadrature"""
        noise = NoiseParams(coupling=1.0, gamma=1.0, detuning=3.0)
        for t in (1e-5, 0.01, 0.1, 1.0, 10.0):
            quadrature = sigma_general(noise, t)
            self.assertAlmostEqual(sigma_detuned(noise, t), quadrature, delta=1e-9 * max(1e-3, abs(quadrature)))
        resonant = NoiseParams(coupling=2.0, gamma=0.5)
        for t in (1e-4, 0.3, 7.0):
            self.assertAlmostEqual(
                sigma_detuned(resonant, t) / sigma_resonant(resonant, t), 1.0, delta=1e-12,
            )

    def test_detuned_first_crossing(self):
        """Test that strong detuning still yields the first crossing of sigma"""
        # sigma ~ 0.1 (1 - cos(delta t)) at first: it passes 0.15 and falls back
        noise = NoiseParams(coupling=1e3, gamma=1e-2, detuning=10.0)
        channel = ClassicalNoiseChannel(noise)
        level = 0.15
        crossing = channel.crossing_time(level)
        self.assertAlmostEqual(channel.nu(crossing), level, delta=1e-9)
        self.assertLess(crossing, 2.0 * math.pi / noise.detuning)
        self.assertAlmostEqual(crossing, 2.0 * math.pi / 30.0, delta=0.01 * 2.0 * math.pi / 30.0)
        before = np.linspace(0.0, crossing, 20001)[:-1]
        self.assertTrue(np.all(sigma_detuned(noise, before) < level))

    def test_t_w_closed_form(self):
        """Test the Lambert W closed form against root finding on a log grid"""
        for gamma in (1e-3, 1e-1, 1.0, 10.0, 1e3):
            for coupling in (1e-3, 1.0, 1e3):
                noise = NoiseParams(coupling=coupling, gamma=gamma)
                closed = t_w_classical_closed(noise)
                root = ClassicalNoiseChannel(noise).crossing_time(0.5, closed_form=False)
                self.assertAlmostEqual(closed / root, 1.0, delta=1e-9)
        white = t_w_classical_closed(NoiseParams(coupling=1.0, gamma=1e6))
        self.assertAlmostEqual(white, 0.5, delta=1e-5)

    def test_brukner_visibility(self):
        """Test the interferometric visibility and its decay time"""
        self.assertEqual(float(brukner_visibility(1e5, 300.0, 9.81, 1e-6, 0.0)), 1.0)
        tau_bar = brukner_tau_bar(1e5, 300.0, 9.81, 1e-6)
        self.assertAlmostEqual(tau_bar / 1.04319e6, 1.0, delta=1e-3)
        self.assertAlmostEqual(
            float(brukner_visibility(1e5, 300.0, 9.81, 1e-6, tau_bar)), math.exp(-1.0), delta=1e-4,
        )

    def test_brukner_small_time_gaussian(self):
        """Test the Gaussian short-time form of the visibility"""
        tau_bar = brukner_tau_bar(1e5, 300.0, 9.81, 1e-6)
        self.assertAlmostEqual(
            float(brukner_visibility_gaussian(1e5, 300.0, 9.81, 1e-6, tau_bar)), math.exp(-1.0), delta=1e-14,
        )
        for fraction in (0.01, 0.1, 0.5, 1.0):
            t = fraction * tau_bar
            gaussian = float(brukner_visibility_gaussian(1e5, 300.0, 9.81, 1e-6, t))
            full = float(brukner_visibility(1e5, 300.0, 9.81, 1e-6, t))
            self.assertAlmostEqual(gaussian / full, 1.0, delta=1e-4)

    def test_observer_dilation(self):
        """Test the Schwarzschild observer-frame factor"""
        self.assertEqual(observer_dilation_factor(EARTH_MASS, EARTH_RADIUS, EARTH_RADIUS), 1.0)
        excess = observer_dilation_excess(EARTH_MASS, EARTH_RADIUS, EARTH_RADIUS + 1e3)
        self.assertTrue(1e-14 < excess < 1e-12)
        far = observer_dilation_factor(EARTH_MASS, EARTH_RADIUS, 1e30)
        self.assertGreater(far, 1.0)
        with self.assertRaises(InsideHorizon):
            observer_dilation_factor(EARTH_MASS, 0.5 * schwarzschild_radius(EARTH_MASS), EARTH_RADIUS)

    def test_observer_frame_time(self):
        """Test that observer-frame times scale with the dilation factor"""
        self.assertEqual(observer_frame_time(2.5, EARTH_MASS, EARTH_RADIUS, EARTH_RADIUS), 2.5)
        above = EARTH_RADIUS + 1e3
        factor = observer_dilation_factor(EARTH_MASS, EARTH_RADIUS, above)
        for tau in (1e-3, 1.0, 7.3765e5):
            self.assertAlmostEqual(
                observer_frame_time(tau, EARTH_MASS, EARTH_RADIUS, above), tau * factor, delta=1e-15 * tau,
            )
        self.assertGreater(observer_frame_time(1.0, EARTH_MASS, EARTH_RADIUS, above), 1.0)
        self.assertLess(observer_frame_time(1.0, EARTH_MASS, above, EARTH_RADIUS), 1.0)
        with self.assertRaises(InsideHorizon):
            observer_frame_time(1.0, EARTH_MASS, EARTH_RADIUS, 0.5 * schwarzschild_radius(EARTH_MASS))

    def test_channel_universality(self):
        """Test that indicators depend on the channel only through nu"""
        alpha = math.sqrt(2.0)
        state = EvenCatState(alpha)
        dilation = DilationChannel(1.0)
        classical = ClassicalNoiseChannel(NoiseParams(coupling=1.0, gamma=1.0))
        for level in (0.1, 0.3, 0.7):
            t1 = dilation.crossing_time(level)
            t2 = classical.crossing_time(level)
            nu1, nu2 = dilation.nu(t1), classical.nu(t2)
            self.assertAlmostEqual(nu1, nu2, delta=1e-10)
            self.assertAlmostEqual(
                nonclassical_depth(dilation, t1), nonclassical_depth(classical, t2), delta=1e-10,
            )
            self.assertAlmostEqual(vogel_witness(alpha, nu1), vogel_witness(alpha, nu2), delta=1e-8)
            self.assertAlmostEqual(fringe_visibility(state, nu1), fringe_visibility(state, nu2), delta=1e-9)
            self.assertAlmostEqual(
                klyshko_series(alpha, nu1, 1)[1], klyshko_series(alpha, nu2, 1)[1], delta=1e-8,
            )


class IndicatorTests(SimpleTestCase):
    """Test cases for the nonclassicality clocks"""

    def test_tau_dec(self):
        """Test the fringe decoherence time"""
        self.assertAlmostEqual(tau_dec_dilation(1.0, 1.0).tau, 0.5, delta=1e-15)
        self.assertAlmostEqual(tau_dec_dilation(2.0, 1.0).tau, 0.25, delta=1e-15)
        defaults = PhysicalParams.trapped_ion_defaults()
        result = tau_dec_dilation(defaults.alpha, kappa(defaults))
        self.assertAlmostEqual(result.tau / 7.3765e5, 1.0, delta=2e-3)
        self.assertAlmostEqual(result.validity_bound * math.sqrt(kappa(defaults)), 1.0, delta=1e-12)

    def test_tau_p_and_tau_w(self):
        """Test the depth and Wigner clocks"""
        self.assertAlmostEqual(tau_p(DilationChannel(2.0)), 1.0, delta=1e-15)
        self.assertAlmostEqual(tau_p(DilationChannel(0.5)), 2.0, delta=1e-15)
        self.assertAlmostEqual(tau_w(DilationChannel(1.0)), 1.0, delta=1e-15)
        for k in np.logspace(-15, -9, 7):
            channel = DilationChannel(k)
            self.assertAlmostEqual((tau_p(channel) / tau_w(channel)) ** 2, 2.0, delta=1e-12)

        noise = NoiseParams(coupling=1.0, gamma=1.0)
        classical = ClassicalNoiseChannel(noise)
        self.assertAlmostEqual(sigma_resonant(noise, tau_p(classical)), 1.0, delta=1e-10)
        self.assertAlmostEqual(tau_w(classical), t_w_classical_closed(noise), delta=1e-12)

    def test_nonclassical_depth(self):
        """Test eta = 1 - nu clipped to [0, 1]"""
        channel = DilationChannel(1.0)
        self.assertEqual(nonclassical_depth(channel, 0.0), 1.0)
        self.assertAlmostEqual(nonclassical_depth(channel, tau_w(channel)), 0.5, delta=1e-14)
        self.assertEqual(nonclassical_depth(channel, 2.0 * tau_p(channel)), 0.0)

    def test_tau_v_bounds(self):
        """Test tau_V lies below tau_W and approaches it for large cats"""
        channel = DilationChannel(1.0)
        value = tau_v(math.sqrt(2.0), channel)
        self.assertTrue(0.0 < value < tau_w(channel))
        self.assertTrue(0.48 < vogel_threshold(6.0) < 0.5)
        self.assertGreater(vogel_witness(1.0, 0.01), 0.0)
        self.assertLess(vogel_witness(1.0, 0.5), 0.0)

    def test_tau_v_dense_scan(self):
        """Test tau_V against a dense scan of the normally ordered chi"""
        alpha = math.sqrt(2.0)
        state = EvenCatState(alpha)
        channel = DilationChannel(1.0)
        crossing = tau_v(alpha, channel)
        u = np.linspace(0.05, 12.0, 240001)

        def peak(t):
            return float(np.max(even_cat_chi(state, channel.nu(t), NORMAL, u, 0.0)))

        self.assertAlmostEqual(peak(crossing), 1.0, delta=1e-7)
        self.assertGreater(peak((1.0 - 1e-6) * crossing), 1.0)
        self.assertLess(peak((1.0 + 1e-6) * crossing), 1.0)

    def test_tau_v_approaches_tau_w(self):
        """Test tau_V / tau_W grows with alpha and saturates near one"""
        channel = DilationChannel(1.0)
        ratios = [tau_v(alpha, channel) / tau_w(channel) for alpha in (0.5, 1.0, 2.0, 4.0, 6.0)]
        self.assertTrue(np.all(np.diff(ratios) > 0))
        self.assertGreater(ratios[-1], 0.99)
        self.assertLess(ratios[-1], 1.0)

    def test_tau_v_tolerance_stability(self):
        """Test that a tighter tolerance does not move tau_V"""
        tol = Tolerance.for_roots()
        coarse = vogel_threshold(1.3, tol)
        fine = vogel_threshold(1.3, tol.tightened())
        self.assertAlmostEqual(coarse / fine, 1.0, delta=1e-8)

    def test_klyshko_B(self):
        """Test B(n) on classical and cat distributions"""
        for n in range(5):
            self.assertAlmostEqual(klyshko_B(n, lambda k: poisson.pmf(k, 1.7)), 0.0, delta=1e-15)
            self.assertGreater(klyshko_B(n, lambda k: geom.pmf(k + 1, 0.4)), 0.0)
        cat = EvenCatState(1.0)
        b1 = klyshko_B(1, lambda n: cat_pmf_exact(cat, n))
        self.assertAlmostEqual(b1, -2.0 * CAT_P2 ** 2, delta=1e-15)
        self.assertAlmostEqual(b1, -0.209987, delta=1e-6)
        with self.assertRaises(ParameterError):
            klyshko_B(-1, [1.0])

    def test_klyshko_baseline_by_quadrature(self):
        """Test B(1) at t = 0 from the quadrature photon distribution"""
        pmf = photon_distribution(EvenCatState(1.0).characteristic(), 3)
        self.assertAlmostEqual(pmf[1].raw, 0.0, delta=1e-10)
        self.assertAlmostEqual(pmf[3].raw, 0.0, delta=1e-10)
        self.assertAlmostEqual(klyshko_B(1, pmf), -2.0 * CAT_P2 ** 2, delta=1e-8)

    def test_klyshko_series(self):
        """Test B(0) .. B(3) of the cat and B(1) at the Klyshko threshold"""
        cat = EvenCatState(1.0)
        p = [cat_pmf_exact(cat, n) for n in range(6)]
        expected = [2.0 * p[0] * p[2], -2.0 * p[2] ** 2, 4.0 * p[2] * p[4], -4.0 * p[4] ** 2]
        series = klyshko_series(1.0, 0.0, 3)
        self.assertEqual(len(series), 4)
        for value, exact in zip(series, expected):
            self.assertAlmostEqual(value, exact, delta=1e-8)
        self.assertGreater(series[2], 0.0)
        self.assertLess(series[3], 0.0)

        alpha = math.sqrt(2.0)
        at_threshold = klyshko_series(alpha, klyshko_threshold(alpha), 2)
        self.assertAlmostEqual(at_threshold[1], 0.0, delta=1e-9)

    def test_tau_k_tolerance_stability(self):
        """Test that a tighter quadrature tolerance does not move tau_K"""
        tol = Tolerance.default()
        coarse = klyshko_threshold(1.3, tol)
        fine = klyshko_threshold(1.3, tol.tightened())
        self.assertAlmostEqual(coarse / fine, 1.0, delta=1e-7)

    def test_tau_k_ratio_against_alpha(self):
        """Test tau_K / tau_W rises then falls across alpha"""
        channel = DilationChannel(1.0)
        expected = {1.0: 0.753, 1.5: 0.888, 2.0: 0.881, 3.0: 0.735}
        ratios = {alpha: tau_k(alpha, channel) / tau_w(channel) for alpha in expected}
        for alpha, value in expected.items():
            self.assertAlmostEqual(ratios[alpha], value, delta=1e-3)
        self.assertGreater(ratios[1.5], ratios[1.0])
        self.assertGreater(ratios[2.0], ratios[3.0])

    def test_indicator_ordering_across_alpha(self):
        """Test tau_K < tau_V < tau_W < tau_p over alpha in [0.8, 3]"""
        channel = DilationChannel(1.0)
        for alpha in np.linspace(0.8, 3.0, 5):
            times = indicator_times(float(alpha), channel)
            self.assertTrue(times.is_ordered(), msg=f'alpha={alpha}: {times}')

    def test_missing_alpha(self):
        """Test that an absent cat amplitude is reported as a missing parameter"""
        with self.assertRaises(MissingParam):
            indicator_times(None, DilationChannel(1.0))
        with self.assertRaises(MissingParam):
            validate_required_fields({'alpha': None, 'kappa': 1.0}, ['alpha', 'kappa'])
        validate_required_fields({'alpha': 1.0}, ['alpha'])

    def test_indicator_ordering(self):
        """Test tau_K < tau_V < tau_W < tau_p for alpha = sqrt(2)"""
        alpha = math.sqrt(2.0)
        self.assertLess(klyshko_threshold(alpha), vogel_threshold(alpha))
        times = indicator_times(alpha, DilationChannel(1.0))
        self.assertIsInstance(times, IndicatorTimes)
        self.assertTrue(times.is_ordered())
        self.assertAlmostEqual(times.tau_k, tau_k(alpha, DilationChannel(1.0)), delta=1e-12)
        self.assertEqual(tuple(times.as_row()), IndicatorTimes.COLUMNS)

    def test_wigner_negativity(self):
        """Test the Wigner minimum before, at and after tau_W"""
        channel = DilationChannel(1.0)
        for alpha in (1.0, 2.0):
            self.assertLess(wigner_negativity_scan(alpha, channel, 0.0), 0.0)
            at_crossing = wigner_negativity_scan(alpha, channel, tau_w(channel))
            self.assertLessEqual(abs(at_crossing), 1e-6 * wigner_maximum(alpha, 0.5))
            self.assertGreaterEqual(wigner_negativity_scan(alpha, channel, 1.05 * tau_w(channel)), -1e-12)
            self.assertGreaterEqual(wigner_negativity_scan(alpha, channel, 2.0 * tau_w(channel)), -1e-12)


class FockOracleTests(SimpleTestCase):
    """Test cases for the brute-force Fock-basis check"""

    def test_channel_matches_master_equation(self):
        """Test the closed-form channel against the integrated master equation"""
        record = run_validation(1.0, 1.0, 0.5, default_cutoff(1.0))
        self.assertLessEqual(record.trace_distance, 1e-6)
        self.assertAlmostEqual(record.purity_chi, record.purity_fock, delta=1e-6)

    def test_position_geometry_matches(self):
        """Test the position-only dephasing geometry"""
        record = run_validation(1.0, 1.0, 0.4, 30, geometry=DampingGeometry.POSITION)
        self.assertLessEqual(record.trace_distance, 1e-6)

    def test_parity_coherences_stay_zero(self):
        """Test that dephasing never couples even and odd Fock states"""
        generator = dilation_generator(1.0, 29)
        rho0 = EvenCatState(1.0).density_matrix(29)
        self.assertEqual(rho0.populations()[1], 0.0)
        rho = evolve_fock(generator, rho0, 0.8)
        self.assertLess(rho.parity_coherence(), 1e-10)
        # XrhoX moves weight to odd photon numbers once nu > 0
        self.assertGreater(rho.populations()[1], 1e-3)

    def test_purity_decreases(self):
        """Test that purity decays monotonically"""
        purities = purity_trajectory(1.0, 1.0, [0.0, 0.3, 0.6, 0.9], 29)
        self.assertAlmostEqual(purities[0], 1.0, delta=1e-12)
        self.assertTrue(np.all(np.diff(purities) < 0))

    def test_cutoff_convergence(self):
        """Test that ten more Fock levels leave the trace distance unchanged"""
        coarse, fine, converged = cutoff_converged(1.0, 1.0, 0.5, default_cutoff(1.0))
        self.assertTrue(converged)
        self.assertLess(abs(coarse - fine), 1e-8)
        self.assertLessEqual(fine, 1e-6)

    def test_small_cutoff_rejected(self):
        """Test cutoff validation"""
        with self.assertRaises(ParameterError):
            dilation_generator(1.0, 3)


class ExperimentTests(SimpleTestCase):
    """Test cases for the figure sweeps and the consistency report"""

    def test_sweep_spec_validation(self):
        """Test sweep parameter checks"""
        with self.assertRaises(ParameterError):
            SweepSpec(alpha_grid=(2.0, 1.0))
        with self.assertRaises(ParameterError):
            SweepSpec(indicators=('tau_x',))
        self.assertEqual(RateUnits.OMEGA0.to_per_second(2.0, 3.0), 6.0)
        self.assertEqual(RateUnits.HERTZ.to_per_second(2.0, 3.0), 2.0)
        self.assertEqual(parse_decades('-8:-4'), (-8.0, -4.0))
        with self.assertRaises(ParameterError):
            parse_decades('-4:-8')

    def test_indicator_thresholds(self):
        """Test the damping levels of the four state-level clocks"""
        levels = indicator_thresholds(math.sqrt(2.0))
        self.assertEqual(levels['tau_p'], 1.0)
        self.assertEqual(levels['tau_w'], 0.5)
        self.assertTrue(0.0 < levels['tau_k'] < levels['tau_v'] < 0.5)

    def test_sweep_alpha(self):
        """Test the alpha sweep"""
        frame = sweep_alpha(SweepSpec.for_alpha(1.0, 2.0, 2))
        self.assertEqual(list(frame['alpha']), [1.0, 2.0])
        self.assertTrue((frame['status'] == 'ok').all())
        for value in frame['tau_p_over_tau_w']:
            self.assertAlmostEqual(value, math.sqrt(2.0), delta=1e-12)
        for alpha, value in zip(frame['alpha'], frame['tau_dec_over_tau_w']):
            self.assertAlmostEqual(value, 1.0 / (2.0 * alpha), delta=1e-12)
        self.assertTrue((frame['tau_k_over_tau_w'] < frame['tau_v_over_tau_w']).all())
        self.assertTrue((frame['tau_v_over_tau_w'] < 1.0).all())

    def test_sweep_noise(self):
        """Test the ratio map on a small grid"""
        spec = SweepSpec.for_noise((-4.0, -3.0), (-4.0, -3.0), 2, indicators=('tau_w', 'tau_p'))
        frame = sweep_noise(spec)
        self.assertEqual(len(frame), 8)
        self.assertIn('lambda', frame.columns)
        self.assertTrue((frame['status'] == 'ok').all())
        self.assertTrue((frame['shaded'] == (frame['ratio'] < 1.0)).all())
        row = frame[(frame['indicator'] == 'tau_w')].iloc[0]
        noise = NoiseParams(coupling=row['lambda'], gamma=row['gamma'])
        self.assertAlmostEqual(row['t_classical'], t_w_classical_closed(noise), delta=1e-9 * row['t_classical'])
        for _, group in frame.groupby(['indicator', 'gamma']):
            times = group.sort_values('lambda')['t_classical'].to_numpy()
            self.assertTrue(np.all(np.diff(times) < 0))

    def test_ratio_contour(self):
        """Test log-log interpolation of the unity contour"""
        frame = pd.DataFrame({
            'gamma': [1.0, 1.0, 1.0],
            'lambda': [1e-2, 1e-1, 1.0],
            'indicator': ['tau_w'] * 3,
            'ratio': [100.0, 10.0, 0.1],
            'status': ['ok'] * 3,
        })
        contour = ratio_contour(frame, 'tau_w')
        self.assertAlmostEqual(contour['lambda_at_unity'].iloc[0], 10 ** -0.5, delta=1e-12)

    def test_unity_diagonal(self):
        """Test the rate at which classical and gravitational tau_W coincide"""
        params = PhysicalParams.trapped_ion_defaults()
        rate = unity_diagonal(params, RateUnits.HERTZ)
        self.assertAlmostEqual(rate / 5.7e-7, 1.0, delta=0.02)
        t_classical = t_w_classical_closed(NoiseParams(coupling=rate, gamma=rate))
        t_grav = tau_w(DilationChannel(kappa(params)))
        self.assertAlmostEqual(t_classical / t_grav, 1.0, delta=1e-9)
        scaled = unity_diagonal(params, 'omega0', omega0=10.0)
        self.assertAlmostEqual(scaled * 10.0, rate, delta=1e-12 * rate)

    def test_consistency_report(self):
        """Test the quoted relations come out as computed"""
        frame = consistency_report(PhysicalParams.trapped_ion_defaults()).set_index('quantity')
        self.assertAlmostEqual(frame.loc['tau_p_sq_over_tau_w_sq', 'computed'], 2.0, delta=1e-12)
        self.assertAlmostEqual(frame.loc['tau_bar_dec_over_tau_dec', 'computed'], math.sqrt(2.0), delta=1e-9)
        self.assertAlmostEqual(frame.loc['tau_p_over_2alpha_tau_dec', 'computed'], math.sqrt(2.0), delta=1e-12)
        self.assertAlmostEqual(frame.loc['kappa_per_s2', 'computed'] / 2.297e-13, 1.0, delta=2e-3)
        self.assertNotIn('tau_w_observer_s', frame.index)

    def test_consistency_report_observer(self):
        """Test the observer-frame rows for a clock 1 km above the system"""
        params = PhysicalParams.trapped_ion_defaults().replace(
            source_mass=EARTH_MASS, r_sys=EARTH_RADIUS, r_obs=EARTH_RADIUS + 1e3,
        )
        frame = consistency_report(params).set_index('quantity')
        tau_w_sys = frame.loc['tau_w_s', 'computed']
        tau_w_obs = frame.loc['tau_w_observer_s', 'computed']
        self.assertGreater(tau_w_obs, tau_w_sys)
        self.assertAlmostEqual(tau_w_obs / tau_w_sys, 1.0, delta=1e-12)
        self.assertTrue(1e-14 < frame.loc['observer_dilation_excess', 'computed'] < 1e-12)


class CommandTests(SimpleTestCase):
    """Test cases for the management commands"""

    def run_command(self, name, **options):
        out = StringIO()
        call_command(name, stdout=out, stderr=StringIO(), **options)
        return out.getvalue()

    def test_app_config(self):
        """Test the decoherence app is registered without model settings"""
        config = django_apps.get_app_config('decoherence')
        self.assertEqual(config.verbose_name, 'Cat-state decoherence clocks')
        self.assertNotIn('default_auto_field', type(config).__dict__)
        self.assertEqual(list(config.get_models()), [])

    def test_header_line(self):
        """Test the CSV header echo"""
        header = csv_header({'alpha': 1.5, 'skipped': None})
        self.assertTrue(header.startswith('# catclock '))
        self.assertIn('alpha=1.5', header)
        self.assertNotIn('skipped', header)

    def test_times(self):
        """Test the indicator times command"""
        text = self.run_command('times', alpha=1.0, gamma=1e-3, coupling=1e-3)
        self.assertTrue(text.startswith('# catclock'))
        frame = read_output(text)
        self.assertEqual(list(frame.columns), list(IndicatorTimes.COLUMNS))
        self.assertEqual(list(frame['channel']), ['dilation', 'classical'])
        self.assertAlmostEqual(frame['tau_w'].iloc[1], t_w_classical_closed(NoiseParams(1e-3, 1e-3)), delta=1.0)

    def test_sweep_alpha_to_file(self):
        """Test writing the alpha sweep to a file"""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'alpha_sweep.csv')
            self.run_command('sweep_alpha', alpha_from=1.0, alpha_to=1.5, points=2, out=path)
            with open(path, encoding='utf-8') as stream:
                frame = read_output(stream.read())
        self.assertEqual(len(frame), 2)
        self.assertIn('tau_v_over_tau_w', frame.columns)

    def test_sweep_noise(self):
        """Test the ratio map command"""
        text = self.run_command(
            'sweep_noise', gamma_decades='-4:-3', lambda_decades='-4:-3', points=2, indicators='tau_w',
        )
        self.assertIn('rate_units=hertz', text.splitlines()[0])
        self.assertEqual(len(read_output(text)), 4)

    def test_wigner(self):
        """Test the Wigner grid command"""
        frame = read_output(self.run_command('wigner', alpha=1.0, nu=0.2, grid=5))
        self.assertEqual(list(frame.columns), ['re_beta', 'im_beta', 'value'])
        self.assertEqual(len(frame), 25)

    def test_wigner_closed_form_needs_s_zero(self):
        """Test that the closed method rejects other orderings with exit code 2"""
        with self.assertRaises(CommandError) as context:
            self.run_command('wigner', alpha=1.0, s=-1.0, grid=5)
        self.assertEqual(context.exception.returncode, 2)

    def test_bad_input_exit_code(self):
        """Test exit code 2 for invalid parameters"""
        with self.assertRaises(CommandError) as context:
            self.run_command('wigner', alpha=-1.0, grid=5)
        self.assertEqual(context.exception.returncode, 2)

    def test_negative_damping_exit_code(self):
        """Test exit code 2 for a negative damping exponent"""
        with self.assertRaises(CommandError) as context:
            self.run_command('wigner', alpha=1.0, nu=-1.0, grid=5)
        self.assertEqual(context.exception.returncode, 2)

    def test_times_without_alpha(self):
        """Test exit code 2 when the parameter file has no cat amplitude"""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'no_alpha.params')
            with open(path, 'w', encoding='utf-8') as stream:
                stream.write('mass=1e-17\ntrap_freq=6283.185307179586\ndelta_e=1e-20\n')
            with self.assertRaises(CommandError) as context:
                self.run_command('times', params=path)
        self.assertEqual(context.exception.returncode, 2)
        self.assertIn('alpha', str(context.exception))

    def test_solver_failure_exit_code(self):
        """Test exit code 3 for solver failures"""
        with self.assertRaises(CommandError) as context:
            self.run_command('validate', alpha=2.0, kappa=1.0, t=0.1, cutoff=4)
        self.assertEqual(context.exception.returncode, 3)

    def test_validate(self):
        """Test the Fock-basis validation command"""
        frame = read_output(self.run_command('validate', alpha=0.8, kappa=1.0, t=0.5))
        self.assertLessEqual(frame['trace_distance'].iloc[0], 1e-6)

    def test_consistency_report(self):
        """Test the consistency report command"""
        frame = read_output(self.run_command('consistency_report'))
        self.assertIn('tau_bar_dec_over_tau_dec', list(frame['quantity']))
