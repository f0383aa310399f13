# Tests for the action/envelope separation and the classical random-phase model
import math

import numpy as np
from django.test import SimpleTestCase, override_settings

from interferometry import golden
from interferometry.exact_evolution import PhaseGrid, compute_trace
from interferometry.exceptions import InvalidConfigurationError, OutsideSupportError
from interferometry.fringe_analysis import find_probability_zeros
from interferometry.semiclassical import (
    ClassicalPhaseModel,
    action,
    approx_amplitude,
    approximation_error,
    calibrate_anchor,
    classical_density,
    classical_envelope_oracle,
    classical_j3,
    classical_j3_squared,
    classical_support,
    continuity_residual,
    envelope,
    peak_phase,
    semiclassical_curve,
    vector_length_squared,
)
from interferometry.spin_algebra import TwoModeConfig


class ClassicalJ3Test(SimpleTestCase):
    """The classical intensity difference between the paths."""

    def test_published_values(self):
        """|J3| at the tabulated phases."""
        for config, phi, expected in golden.CLASSICAL_J3:
            value = classical_j3(config.N, config.m_psi, config.m, phi, 'exact')
            with self.subTest(config=str(config), phi=phi):
                self.assertFalse(value.evanescent)
                self.assertAlmostEqual(value.magnitude, expected, delta=golden.CLASSICAL_J3_TOLERANCE)

    def test_length_conventions(self):
        """The exact length squared is N(N+2)/4, the shifted one ((N+1)/2)^2."""
        self.assertEqual(vector_length_squared(8, 'exact'), 20.0)
        self.assertEqual(vector_length_squared(8, 'shifted'), 20.25)
        with self.assertRaises(InvalidConfigurationError):
            vector_length_squared(8, 'classical')

    def test_symmetric_in_input_and_output(self):
        """Exchanging m_psi and m leaves J3^2 unchanged."""
        phi = np.linspace(0.1, 3.0, 50)
        np.testing.assert_allclose(classical_j3_squared(16, 0, 4, phi), classical_j3_squared(16, 4, 0, phi))
        np.testing.assert_allclose(classical_j3_squared(9, 1.5, -2.5, phi),
                                   classical_j3_squared(9, -2.5, 1.5, phi))

    def test_even_in_phase(self):
        """J3 depends on |phi| only."""
        self.assertEqual(classical_j3(8, 2, 2, -0.9), classical_j3(8, 2, 2, 0.9))

    def test_evanescent_outside_support(self):
        """Below the support edge the value is flagged evanescent."""
        self.assertTrue(classical_j3(16, 0, 4, 0.2).evanescent)

    def test_maximum_at_half_pi_for_equal_input(self):
        """For m_psi = 0 the largest |J3| sits at phi = pi/2."""
        (interval,) = classical_support(16, 0, 4, 'exact')
        self.assertAlmostEqual(peak_phase(16, 0, 4, interval, 'exact'), math.pi / 2, delta=1e-6)

    def test_support_edge_for_unequal_output(self):
        """For m_psi = 0 the support starts at sin(phi) = 2m/sqrt(N(N+2))."""
        (low, high), = classical_support(16, 0, 4, 'exact')
        self.assertAlmostEqual(low, math.asin(8 / math.sqrt(16 * 18)), delta=1e-9)
        self.assertAlmostEqual(high, math.pi - low, delta=1e-9)

    def test_quarter_case(self):
        """
        m = m_psi = (N+1)/4 with the (N+1)/2 length: J3 peaks at phi = 0 with
        sqrt(3/4) of the length, the same as the m_psi = 0 peak at pi/2, and
        reaches zero at |phi| = 2 pi/3.
        """
        (low, high), = classical_support(7, 2.0, 2.0, 'shifted')
        self.assertEqual(low, 0.0)
        self.assertAlmostEqual(high, 2 * math.pi / 3, delta=1e-9)

        peak = classical_j3(7, 2.0, 2.0, 0.0, 'shifted').magnitude
        self.assertAlmostEqual(peak, math.sqrt(3 / 4) * 4, delta=1e-12)
        self.assertAlmostEqual(peak, classical_j3(7, 0.0, 2.0, math.pi / 2, 'shifted').magnitude, delta=1e-12)

        values = classical_j3_squared(7, 2.0, 2.0, np.linspace(0.0, 2.0, 100), 'shifted')
        self.assertTrue(np.all(np.diff(values) < 0))


class EnvelopeAndActionTest(SimpleTestCase):
    """The envelope A, the action S and their approximation 2 A cos S."""

    def setUp(self):
        self.equal_8 = TwoModeConfig(8, 0, 0)

    def test_envelope_at_half_pi(self):
        """A^2 = 1/(9 pi) for eight photons and m_psi = m = 0."""
        self.assertAlmostEqual(envelope(8, 0, 0, math.pi / 2, 'shifted') ** 2, 1 / (9 * math.pi), delta=1e-12)
        self.assertAlmostEqual(classical_density(8, 0, 0, math.pi / 2, 'shifted'), 2 / (9 * math.pi), delta=1e-12)

    def test_envelope_outside_support(self):
        """The envelope is undefined outside the support."""
        with self.assertRaises(OutsideSupportError):
            envelope(16, 0, 4, 0.2)

    def test_constant_integrand_action(self):
        """With m_psi = m = 0 and the exact length, J3 is constant so S is linear."""
        value = action(8, 0, 0, 2.0, 1.0, 0.0, 'exact')
        self.assertAlmostEqual(value, -math.sqrt(80) / 2, delta=1e-9)

    def test_action_rejects_opposite_signs(self):
        """The action does not integrate through phi = 0."""
        with self.assertRaises(InvalidConfigurationError):
            action(8, 0, 0, -1.0, 1.0, 0.0)

    def test_continuity_residual(self):
        """The envelope and action satisfy the continuity equation."""
        for args in ((8, 0, 0, 1.3), (16, 0, 4, 1.0), (8, 2, 2, 0.5)):
            with self.subTest(args=args):
                self.assertLess(abs(continuity_residual(*args)), 1e-9)

    def test_equal_photon_closed_form(self):
        """2 A cos S = 2 sqrt(1/(9 pi sin phi)) cos(4.5 phi - pi/4) for N = 8."""
        expected = 2 * math.sqrt(1 / (9 * math.pi * math.sin(1.2))) * math.cos(4.5 * 1.2 - math.pi / 4)
        self.assertAlmostEqual(approx_amplitude(self.equal_8, 1.2, 'shifted'), expected, delta=1e-9)

    def test_zero_at_predicted_minimum(self):
        """The first equal-case zero for N = 8 is at pi/6."""
        self.assertAlmostEqual(approx_amplitude(self.equal_8, math.pi / 6, 'shifted'), 0.0, delta=1e-9)

    def test_beam_splitter_anchor(self):
        """m_psi = m = 0 with even N uses the beam-splitter anchor."""
        anchor = calibrate_anchor(TwoModeConfig(16, 0, 0))
        self.assertEqual(anchor.method, 'beam-splitter parity')
        self.assertAlmostEqual(anchor.action, -4 * math.pi)

    def test_anchor_reproduces_nearest_exact_zero(self):
        """The calibrated approximation vanishes at an exact zero next to the anchor."""
        config = golden.CROSS_16
        anchor = calibrate_anchor(config, length='exact')
        self.assertEqual(anchor.method, 'nearest exact zero')
        zeros = find_probability_zeros(compute_trace(config))
        # the peak sits halfway between two zeros; either may be the calibration point
        nearest = sorted(zeros, key=lambda zero: abs(zero - anchor.phi))[:2]
        residual = min(abs(approx_amplitude(config, zero, 'exact', anchor=anchor)) for zero in nearest)
        self.assertLess(residual, 1e-8)

    def test_negative_phase_parity(self):
        """The approximation has the same mirror parity as the exact amplitude."""
        for config, sign in ((golden.CROSS_8, 1.0), (TwoModeConfig(7, 0.5, -0.5), -1.0)):
            with self.subTest(config=str(config)):
                self.assertAlmostEqual(approx_amplitude(config, -1.4), sign * approx_amplitude(config, 1.4),
                                       delta=1e-12)

    def test_margin_rejects_support_edges(self):
        """Points within SUPPORT_MARGIN of an edge are refused."""
        (low, _), = classical_support(16, 0, 4)
        with self.assertRaises(OutsideSupportError):
            approx_amplitude(golden.CROSS_16, low + 0.01)


class SemiclassicalCurveTest(SimpleTestCase):
    """Semiclassical quantities tabulated on a grid."""

    def test_curve_layout(self):
        """Outside the support the envelope is NaN; near the edges so is the approximation."""
        grid = PhaseGrid.open_interval(0.0, math.pi, 500)
        curve = semiclassical_curve(golden.CROSS_16, grid, 'exact')
        (low, high), = curve.support
        inside = (grid.phi_values >= low) & (grid.phi_values <= high)
        np.testing.assert_array_equal(curve.in_support, inside)
        self.assertTrue(np.all(np.isnan(curve.envelope[~inside])))
        self.assertTrue(np.all(np.isnan(curve.approximation[grid.phi_values < low + 0.05])))
        np.testing.assert_allclose(curve.peak_envelope[inside], 4 * curve.envelope[inside] ** 2)

    def test_radicand_identity(self):
        """J3^2 + (m_psi^2 - 2 cos(phi) m_psi m + m^2) / sin^2(phi) = N(N+2)/4 on the support."""
        grid = PhaseGrid.open_interval(0.0, math.pi, 300)
        curve = semiclassical_curve(golden.SELF_8, grid, 'exact')
        inside = curve.in_support
        phi = grid.phi_values[inside]
        np.testing.assert_allclose(curve.j3_classical[inside] ** 2,
                                   classical_j3_squared(8, 2, 2, phi, 'exact'), rtol=1e-12)
        transverse = (4 - 8 * np.cos(phi) + 4) / np.sin(phi) ** 2
        np.testing.assert_allclose(curve.j3_classical[inside] ** 2 + transverse, 20.0, rtol=1e-10)

    def test_action_decreases_across_support(self):
        """dS/dphi = -J3 < 0 inside every support interval."""
        grid = PhaseGrid.open_interval(0.0, math.pi, 400)
        for config in (golden.CROSS_16, golden.SELF_16, golden.EQUAL_8):
            curve = semiclassical_curve(config, grid, 'exact')
            with self.subTest(config=str(config)):
                for low, high in curve.support:
                    inside = (grid.phi_values > low) & (grid.phi_values < high)
                    self.assertTrue(np.all(np.diff(curve.action[inside]) < 0))

    def test_envelope_times_jacobian_is_rho0(self):
        """A^2 |sin(phi) J3| = 1/(2 pi) at every interior support point."""
        grid = PhaseGrid.open_interval(0.0, math.pi, 400)
        for config in (golden.CROSS_16, golden.SELF_8):
            for length in ('exact', 'shifted'):
                curve = semiclassical_curve(config, grid, length)
                interior = curve.in_support & (curve.j3_classical > 1e-6)
                product = curve.envelope[interior] ** 2 \
                    * np.abs(np.sin(grid.phi_values[interior]) * curve.j3_classical[interior])
                with self.subTest(config=str(config), length=length):
                    np.testing.assert_allclose(product, 1 / (2 * math.pi), rtol=1e-10)

    def test_approximation_matches_exact_amplitude(self):
        """Largest deviation of 2A cos S from the exact amplitude on [0.4, 2.7]."""
        low, high = golden.APPROXIMATION_RANGE
        for config, tolerance in golden.APPROXIMATION_TOLERANCES:
            error = approximation_error(config, PhaseGrid.linspace(low, high, 300),
                                        golden.APPROXIMATION_LENGTH)
            with self.subTest(config=str(config)):
                self.assertLess(error, tolerance)


class ClassicalOracleTest(SimpleTestCase):
    """Monte-Carlo random-phase interference against the density 2 A^2."""

    def test_no_phase_no_mixing(self):
        """At phi = 0 every sample keeps the input difference."""
        histogram = classical_envelope_oracle(8, 1, 0.0, 20000, seed=3)
        self.assertEqual(histogram.counts.sum(), 20000)
        self.assertEqual(histogram.counts[list(histogram.m_values).index(1.0)], 20000)

    def test_frequencies_sum_to_one(self):
        """Frequencies are normalized."""
        histogram = classical_envelope_oracle(5, 0.5, 1.1, 50000, seed=9)
        self.assertAlmostEqual(histogram.frequencies.sum(), 1.0, delta=1e-12)

    def test_seed_determines_result_regardless_of_threads(self):
        """Counts depend on the seed, never on the worker count."""
        with override_settings(FRINGELAB={'THREADS': 1, 'MC_CHUNK_SIZE': 4096}):
            single = classical_envelope_oracle(16, 0, 1.0, 100000, seed=42)
        with override_settings(FRINGELAB={'THREADS': 4, 'MC_CHUNK_SIZE': 4096}):
            several = classical_envelope_oracle(16, 0, 1.0, 100000, seed=42)
        np.testing.assert_array_equal(single.counts, several.counts)
        other = classical_envelope_oracle(16, 0, 1.0, 100000, seed=43)
        self.assertFalse(np.array_equal(other.counts, single.counts))

    def test_interior_bins_follow_density(self):
        """Interior bins agree with 2 A^2 within a few standard errors."""
        samples = golden.ENVELOPE_MC_SAMPLES
        histogram = classical_envelope_oracle(golden.ENVELOPE_MC_N, golden.ENVELOPE_MC_M_PSI,
                                              golden.ENVELOPE_MC_PHI, samples, seed=0)
        for m, frequency in zip(histogram.m_values, histogram.frequencies):
            if abs(m) > golden.ENVELOPE_MC_INTERIOR:
                continue
            density = classical_density(16, 0, float(m), math.pi / 2, 'shifted')
            error = math.sqrt(density * (1 - density) / samples)
            with self.subTest(m=m):
                self.assertLess(abs(frequency - density), golden.ENVELOPE_MC_STANDARD_ERRORS * error)

    def test_requires_enough_samples(self):
        """Fewer than 10^4 samples are refused."""
        with self.assertRaises(InvalidConfigurationError):
            classical_envelope_oracle(8, 0, 1.0, 999)

    def test_model_rejects_long_projection(self):
        """|m_psi| cannot exceed the vector length."""
        with self.assertRaises(InvalidConfigurationError):
            ClassicalPhaseModel(2, 2.0)
