import math
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from lvevo.analysis import (
    MIN_DISPERSION_EVENTS,
    TrajectorySample,
    apep_profile,
    dispersion_test,
    dpep_profile,
    scaling_regression,
    slope_estimate,
    spacing_profile,
)
from lvevo.errors import DomainError, InsufficientData


class TestTrajectorySample(unittest.TestCase):
    def test_burn_in_keeps_the_tail(self):
        sample = TrajectorySample(np.arange(11.0), np.arange(11.0) * 2)
        tail = sample.after_burn_in(0.3)
        np.testing.assert_array_equal(tail.times, [3, 4, 5, 6, 7, 8, 9, 10])

    def test_times_must_increase(self):
        with self.assertRaises(ValueError):
            TrajectorySample([0.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_shapes_must_match(self):
        with self.assertRaises(ValueError):
            TrajectorySample([0.0, 1.0], [1.0])


class TestSlope(unittest.TestCase):
    def test_exact_line(self):
        t = np.linspace(0.0, 10.0, 50)
        slope, err = slope_estimate(TrajectorySample(t, 0.7 * t + 3.0))
        self.assertAlmostEqual(slope, 0.7, places=12)
        self.assertAlmostEqual(err, 0.0, places=10)

    @settings(deadline=None, max_examples=40)
    @given(st.floats(-5, 5), st.floats(0.1, 10), st.floats(-100, 100))
    def test_affine_equivariance(self, shift, scale, offset):
        rng = np.random.default_rng(0)
        t = np.linspace(0.0, 20.0, 60)
        y = 0.4 * t + rng.normal(0.0, 0.5, t.size)
        base, base_err = slope_estimate(TrajectorySample(t, y))
        moved, moved_err = slope_estimate(TrajectorySample(t, scale * y + shift * t + offset))
        self.assertAlmostEqual(moved, scale * base + shift, delta=1e-8 * (1 + abs(moved)))
        self.assertAlmostEqual(moved_err, scale * base_err, delta=1e-8 * (1 + moved_err))

    def test_too_few_points(self):
        t = np.arange(12.0)
        with self.assertRaises(InsufficientData):
            slope_estimate(TrajectorySample(t, t))


class TestScaling(unittest.TestCase):
    def test_exact_power_law(self):
        eps = [0.001, 0.002, 0.004, 0.008]
        fit = scaling_regression([(e, 3.0 * e**1.5) for e in eps])
        self.assertAlmostEqual(fit.exponent, 1.5, places=10)
        self.assertAlmostEqual(math.exp(fit.intercept), 3.0, places=8)
        self.assertEqual(fit.n, 4)
        self.assertLessEqual(fit.ci_low, fit.exponent)
        self.assertGreaterEqual(fit.ci_high, fit.exponent)

    def test_confidence_interval_covers_noisy_slope(self):
        rng = np.random.default_rng(1)
        eps = np.geomspace(0.001, 0.01, 8)
        fit = scaling_regression([(e, e * math.exp(rng.normal(0.0, 0.05))) for e in eps], level=0.999)
        self.assertLess(fit.ci_low, 1.0)
        self.assertGreater(fit.ci_high, 1.0)

    def test_non_positive_values(self):
        with self.assertRaises(DomainError):
            scaling_regression([(0.1, 1.0), (0.2, 0.0), (0.3, 1.0), (0.4, 1.0)])

    def test_too_few_pairs(self):
        with self.assertRaises(InsufficientData):
            scaling_regression([(0.1, 1.0), (0.2, 2.0), (0.3, 3.0)])


class TestSpacingProfile(unittest.TestCase):
    def test_two_types(self):
        eps = 0.01
        profile = apep_profile([3.0 + eps, 3.0], eps)
        np.testing.assert_allclose(profile.abscissae, [1.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(profile.masses, [eps, 0.0])
        self.assertTrue(math.isnan(profile.fit_rate))

    def test_exponential_profile_fits_exactly(self):
        # type j has N - j types below it at distance log(N - j)
        values = [math.log(m) for m in (5, 4, 3, 2, 1)] + [0.0]
        profile = spacing_profile(values, unit_mass=1.0)
        np.testing.assert_allclose(profile.masses, [5, 4, 3, 2, 1, 0])
        self.assertTrue(np.all(np.diff(profile.abscissae) <= 0))
        self.assertAlmostEqual(profile.fit_rate, 1.0, places=10)
        self.assertAlmostEqual(profile.fit_scale, 1.0, places=10)

    def test_dpep_profile_mass_unit(self):
        profile = dpep_profile([2.0, 1.0, 0.5])
        np.testing.assert_allclose(profile.masses, np.array([2.0, 1.0, 0.0]) * math.exp(-0.5))
        np.testing.assert_allclose(profile.abscissae, [1.5, 0.5, 0.0])
        self.assertEqual(len(profile.rows()), 3)

    def test_needs_two_types(self):
        with self.assertRaises(InsufficientData):
            spacing_profile([1.0], unit_mass=1.0)


class TestDispersion(unittest.TestCase):
    def test_poisson_index_near_one(self):
        rng = np.random.default_rng(2)
        replicates = [np.sort(rng.uniform(0.0, 10.0, rng.poisson(5.0))) for _ in range(400)]
        self.assertAlmostEqual(dispersion_test(replicates, 10.0), 1.0, delta=0.2)

    def test_inhomogeneous_poisson_pooled_by_window(self):
        rng = np.random.default_rng(3)
        replicates = []
        for _ in range(300):
            early = rng.uniform(0.0, 5.0, rng.poisson(8.0))
            late = rng.uniform(5.0, 10.0, rng.poisson(1.0))
            replicates.append(np.sort(np.concatenate([early, late])))
        self.assertAlmostEqual(dispersion_test(replicates, 10.0, windows=2), 1.0, delta=0.2)

    def test_deterministic_counts(self):
        replicates = [np.linspace(0.5, 9.5, 10) for _ in range(20)]
        self.assertEqual(dispersion_test(replicates, 10.0), 0.0)

    def test_single_replicate_uses_windows(self):
        times = np.arange(0.5, 100.0, 1.0)
        self.assertEqual(dispersion_test([times], 100.0, windows=10), 0.0)
        with self.assertRaises(InsufficientData):
            dispersion_test([times], 100.0, windows=1)

    def test_too_few_events(self):
        with self.assertRaises(InsufficientData):
            dispersion_test([[1.0]] * (MIN_DISPERSION_EVENTS - 1), 10.0)


if __name__ == "__main__":
    unittest.main()
