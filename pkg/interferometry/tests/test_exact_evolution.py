# Tests for the exact phase evolution: amplitudes, traces, weak values and
# the per-fringe differential equation
import math

import numpy as np
from django.test import SimpleTestCase, override_settings
from scipy import special

from interferometry import golden
from interferometry.exact_evolution import (
    PhaseGrid,
    SuperpositionInput,
    SuperpositionProjection,
    amplitude,
    compute_trace,
    evaluate_amplitudes,
    fringe_potential,
    matrix_exponential_amplitude,
    noon_state,
    ode_residual,
    ode_solve_oracle,
    path_pair_state,
    probability_distribution,
    realize_amplitudes,
    superposition_weak_value_j3sq,
    verify_weak_identity,
    weak_value_j3,
    weak_value_j3sq,
    weak_value_trace,
)
from interferometry.exceptions import (
    InvalidConfigurationError,
    InvalidPhaseError,
    NonRealizableTraceError,
)
from interferometry.spin_algebra import TwoModeConfig


class PhaseGridTest(SimpleTestCase):
    """Construction and validation of phase grids."""

    def test_open_interval_excludes_endpoints(self):
        """An open grid has the requested size and stays off the ends."""
        grid = PhaseGrid.open_interval(0.0, math.pi, 10)
        self.assertEqual(len(grid), 10)
        self.assertGreater(grid.phi_values[0], 0.0)
        self.assertLess(grid.phi_values[-1], math.pi)

    def test_rejects_bad_grids(self):
        """Empty, unsorted or out-of-range grids are rejected."""
        for values in ([], [0.2, 0.1], [0.1, 0.1], [0.0, float('nan')]):
            with self.subTest(values=values):
                with self.assertRaises(InvalidConfigurationError):
                    PhaseGrid(values)
        with self.assertRaises(InvalidPhaseError):
            PhaseGrid([0.0, 90.0])

    @override_settings(FRINGELAB={'GRID_POINTS': 64})
    def test_default_grid_follows_settings(self):
        """The default grid size is the GRID_POINTS setting."""
        self.assertEqual(len(PhaseGrid.default()), 64)


class AmplitudeTest(SimpleTestCase):
    """The spectral sum against closed forms and the matrix exponential."""

    def test_zero_phase_is_identity(self):
        """Without a phase shift the output reproduces the input difference."""
        distribution = probability_distribution(8, 1, 0.0)
        expected = np.zeros(9)
        expected[3] = 1.0          # m = 1 sits at index N/2 - 1
        np.testing.assert_allclose(distribution, expected, atol=1e-12)

    def test_distribution_is_normalized(self):
        """P(m; phi) summed over m is one."""
        for n, m_psi, phi in ((8, 0, 1.2), (15, 2.5, -0.7), (32, -4, 2.9)):
            with self.subTest(N=n, m_psi=m_psi, phi=phi):
                self.assertAlmostEqual(probability_distribution(n, m_psi, phi).sum(), 1.0, delta=1e-12)

    def test_hong_ou_mandel_dip(self):
        """Two photons, one per port, never leave one per port at phi = pi/2."""
        self.assertLess(abs(amplitude(TwoModeConfig(2, 0, 0), math.pi / 2)), 1e-15)

    def test_equal_photon_amplitude_is_legendre(self):
        """<0|psi(phi)> for m_psi = 0 is P_{N/2}(cos phi) up to sign."""
        phi = np.linspace(0.05, 3.0, 40)
        values = evaluate_amplitudes(TwoModeConfig(8, 0, 0), phi)
        np.testing.assert_allclose(np.abs(values), np.abs(special.eval_legendre(4, np.cos(phi))), atol=1e-12)

    def test_matches_matrix_exponential(self):
        """The spectral sum agrees with exp(-i phi J3) applied to the input."""
        rng = np.random.default_rng(7)
        for n in (1, 4, 9, 16):
            m_psi = n / 2 - rng.integers(0, n + 1)
            m = n / 2 - rng.integers(0, n + 1)
            config = TwoModeConfig(n, m_psi, m)
            for phi in rng.uniform(-math.pi, math.pi, 5):
                with self.subTest(config=str(config), phi=phi):
                    self.assertAlmostEqual(
                        abs(amplitude(config, phi) - matrix_exponential_amplitude(config, phi)), 0.0,
                        delta=1e-10)

    def test_rejects_non_finite_phase(self):
        """Infinite phases are refused."""
        with self.assertRaises(InvalidPhaseError):
            amplitude(TwoModeConfig(4, 0, 0), float('inf'))


class TraceTest(SimpleTestCase):
    """Realization of amplitudes as one global phase times real values."""

    def setUp(self):
        self.grid = PhaseGrid.open_interval(-math.pi, math.pi, 400)

    def test_j1_inputs_are_realizable(self):
        """Every J1 eigenstate input gives global_phase * realized = amplitudes."""
        for config in (golden.CROSS_8, golden.SELF_16, TwoModeConfig(7, 0.5, -2.5)):
            trace = compute_trace(config, self.grid)
            with self.subTest(config=str(config)):
                np.testing.assert_allclose(trace.global_phase * trace.realized, trace.amplitudes, atol=1e-12)
                np.testing.assert_allclose(trace.realized ** 2, trace.probabilities, atol=1e-12)

    def test_real_amplitudes_keep_their_signs(self):
        """An all-real trace has global phase 1 and is returned unchanged, even if its peak is negative."""
        raw = np.array([0.2, -0.9, 0.5, 0.1, 0.3])
        trace = realize_amplitudes(golden.CROSS_8, PhaseGrid.linspace(0.5, 2.5, 5), raw)
        self.assertEqual(trace.global_phase, 1)
        np.testing.assert_array_equal(trace.realized, raw)

    def test_imaginary_trace_has_global_phase_i(self):
        """Multiplying a real trace by i moves the global phase to i and leaves the realized values alone."""
        raw = np.array([0.2, -0.9, 0.5, 0.1, 0.3])
        trace = realize_amplitudes(golden.CROSS_8, PhaseGrid.linspace(0.5, 2.5, 5), 1j * raw)
        self.assertAlmostEqual(trace.global_phase, 1j, delta=1e-15)
        np.testing.assert_allclose(trace.realized, raw, atol=1e-15)

    def test_global_phase_in_right_half_plane(self):
        """Computed global phases are unit numbers with Re > 0 (or on the positive imaginary axis)."""
        for config in (golden.CROSS_8, golden.SELF_16, TwoModeConfig(7, 0.5, -2.5)):
            phase = compute_trace(config, self.grid).global_phase
            with self.subTest(config=str(config)):
                self.assertAlmostEqual(abs(phase), 1.0, delta=1e-12)
                self.assertTrue(phase.real > 0 or (phase.real == 0 and phase.imag > 0))

    def test_realization_of_eight_photon_trace(self):
        """(N=8, m_psi=0, m=2) on 2000 points over (0, pi) leaves no imaginary residual."""
        trace = compute_trace(golden.CROSS_8, PhaseGrid.open_interval(0.0, math.pi, 2000))
        residual = np.max(np.abs((np.conj(trace.global_phase) * trace.amplitudes).imag))
        self.assertLess(residual, 1e-9)

    def test_mirror_parity(self):
        """The realized amplitude at -phi is (-1)^(m - m_psi) times its value at phi."""
        for config, sign in ((golden.CROSS_8, 1), (TwoModeConfig(7, 0.5, -0.5), -1)):
            trace = compute_trace(config, self.grid)
            with self.subTest(config=str(config)):
                np.testing.assert_allclose(trace.realized[::-1], sign * trace.realized, atol=1e-12)

    def test_non_path_symmetric_input_is_not_realizable(self):
        """A superposition without path symmetry cannot be written as one phase times real values."""
        state = SuperpositionInput.normalized(2, ((1, 1.0), (0, 1j)))
        self.assertFalse(state.is_path_symmetric)
        with self.assertRaises(NonRealizableTraceError):
            compute_trace(SuperpositionProjection(state, 1), PhaseGrid.linspace(0.1, 3.0, 50))

    def test_superposition_must_be_normalized(self):
        """Unnormalized coefficients are refused."""
        with self.assertRaisesMessage(InvalidConfigurationError, 'normalized'):
            SuperpositionInput(4, ((2, 1.0), (-2, 1.0)))

    def test_superposition_rejects_invalid_m3(self):
        """m3 must be in the spectrum of J3."""
        with self.assertRaises(InvalidConfigurationError):
            SuperpositionInput(4, ((0.5, 1.0),))


class SuperpositionTest(SimpleTestCase):
    """Path-pair states (|m3> + |-m3>)/sqrt(2) have a constant fringe period."""

    def test_noon_fringe_widths(self):
        """All interior fringes of the N = 8 NOON state are pi/4 wide."""
        from interferometry.fringe_analysis import find_probability_zeros, fringe_widths_and_j3
        state = noon_state(8)
        self.assertTrue(state.is_path_symmetric)
        trace = compute_trace(SuperpositionProjection(state, 0),
                              PhaseGrid.open_interval(-math.pi, math.pi, 4000))
        widths = fringe_widths_and_j3(find_probability_zeros(trace)).widths
        self.assertEqual(len(widths), 7)
        np.testing.assert_allclose(widths, math.pi / 4, atol=1e-6)

    def test_path_pair_weak_value_of_j3_squared(self):
        """Both components share m3^2, so the weak value of J3^2 is m3^2 everywhere."""
        state = path_pair_state(8, 3)
        for phi in (0.2, 1.1, 2.5):
            value = superposition_weak_value_j3sq(state, 1, phi)
            with self.subTest(phi=phi):
                self.assertAlmostEqual(value.value.real, 9.0, delta=1e-9)
                self.assertAlmostEqual(value.value.imag, 0.0, delta=1e-9)

    def test_path_pair_of_zero_is_the_single_state(self):
        """For m3 = 0 the pair collapses to |0>."""
        self.assertEqual(path_pair_state(4, 0).components, ((0.0, 1 + 0j),))


class WeakValueTest(SimpleTestCase):
    """Weak values and the fringe equation for J1 eigenstate inputs."""

    def test_j3_weak_value_is_imaginary(self):
        """For J1 eigenstate inputs the weak value of J3 has no real part."""
        config = golden.CROSS_16
        for phi in (0.6, 1.0, 2.0):
            weak = weak_value_j3(config, phi)
            with self.subTest(phi=phi):
                self.assertFalse(weak.singular)
                self.assertLess(abs(weak.value.real), 1e-8)

    def test_singular_flag_at_a_zero(self):
        """At a probability zero the weak values are flagged, not raised."""
        phi = math.acos(1 / math.sqrt(7))          # zero of <2|psi(phi)> for N = 8, m_psi = 0
        self.assertTrue(weak_value_j3(golden.CROSS_8, phi).singular)
        self.assertTrue(weak_value_j3sq(golden.CROSS_8, phi).singular)

    def test_weak_value_trace_flags(self):
        """A trace carries one weak value and one flag per grid point."""
        grid = PhaseGrid.open_interval(0.0, math.pi, 200)
        trace = weak_value_trace(golden.CROSS_8, grid)
        self.assertEqual(trace.j3_weak.shape, (200,))
        self.assertFalse(trace.singular_flags.all())

    def test_weak_identity_and_ode_residual(self):
        """The weak value identity and the fringe equation hold to rounding."""
        for config in golden.ZEROS:
            for phi in (0.35, 1.0, 1.9, 2.8):
                with self.subTest(config=str(config), phi=phi):
                    self.assertLess(ode_residual(config, phi), 1e-8 * config.N ** 2)
                    if not weak_value_j3(config, phi).singular:
                        self.assertLess(verify_weak_identity(config, phi), 1e-8 * config.N ** 2)

    def test_potential_rejects_axis(self):
        """The potential is singular at phi = 0; for N = 8 and m_psi = m = 0 it is the constant 20."""
        with self.assertRaises(InvalidPhaseError):
            ode_residual(golden.CROSS_8, 0.0)
        self.assertAlmostEqual(float(fringe_potential(TwoModeConfig(8, 0, 0), 1.0)), 20.0)


class OdeOracleTest(SimpleTestCase):
    """Runge-Kutta integration of the fringe equation against the spectral sum."""

    def test_matches_spectral_trace(self):
        """The integrated solution follows the spectral realized amplitude."""
        for config in golden.ZEROS:
            integrated = ode_solve_oracle(config, (0.3, 2.3))
            with self.subTest(config=str(config)):
                np.testing.assert_allclose(integrated.realized, integrated.spectral.realized, atol=1e-6)

    def test_span_must_avoid_singular_points(self):
        """The integration span must be increasing and stay off phi = 0."""
        with self.assertRaises(InvalidPhaseError):
            ode_solve_oracle(golden.CROSS_8, (0.01, 1.0))
        with self.assertRaises(InvalidPhaseError):
            ode_solve_oracle(golden.CROSS_8, (1.0, 0.5))
