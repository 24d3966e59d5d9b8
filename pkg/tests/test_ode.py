import unittest
from unittest.mock import MagicMock, patch

import numpy as np

from lvevo.errors import DomainError, StiffnessError
from lvevo.lv.ode import LVSystem, in_gamma, integrate_lv, long_run_state, support_of
from lvevo.lv.traits import PredatorTrait, PreyTrait, SystemParams


class TestIntegrateLV(unittest.TestCase):
    def test_logistic_limit_without_predator(self):
        system = LVSystem(betas=[2.0], alphas=np.zeros((1, 0)), deltas=[])
        traj = integrate_lv([0.1], system, 100.0, times=[0.0, 1.0, 100.0])
        self.assertEqual(traj.states.shape, (3, 1))
        self.assertEqual(traj.states[0, 0], 0.1)
        self.assertAlmostEqual(traj.final[0], 0.5, places=9)

    def test_converges_to_one_prey_equilibrium(self):
        system = LVSystem.from_prey([PreyTrait(2.0, 4.0)], 1.0)
        np.testing.assert_allclose(long_run_state([0.2, 0.7], system, 500.0), [5 / 8, 1 / 4], atol=1e-8)

    def test_failing_predator_dies_out(self):
        params = SystemParams(beta=2.0)
        system = LVSystem.from_predators([PredatorTrait(1.0, 0.3), PredatorTrait(1.0, 0.45)], params)
        final = long_run_state([0.5, 0.2, 0.2], system, 3000.0)
        self.assertLess(final[2], 1e-8)
        np.testing.assert_allclose(final[:2], [13 / 30, 4 / 30], atol=1e-8)

    def test_samples_at_requested_times(self):
        system = LVSystem.from_prey([PreyTrait(2.0, 4.0)], 1.0)
        times = np.linspace(0.0, 5.0, 11)
        traj = integrate_lv([0.2, 0.7], system, 5.0, times=times)
        np.testing.assert_array_equal(traj.times, times)
        self.assertTrue(np.all(traj.states >= 0.0))

    def test_tiny_densities_are_clipped(self):
        system = LVSystem.from_prey([PreyTrait(0.5, 2.0)], 1.0)
        traj = integrate_lv([0.5, 0.1], system, 100.0, times=[100.0])
        # predator decays at rate 0.75 and ends below the floor
        self.assertEqual(traj.final[1], 0.0)

    def test_rejects_initial_state_outside_gamma(self):
        system = LVSystem.from_prey([PreyTrait(2.0, 4.0), PreyTrait(2.3, 4.22)], 1.0)
        with self.assertRaises(DomainError):
            integrate_lv([0.6, 0.6, 0.1], system, 1.0)
        with self.assertRaises(DomainError):
            integrate_lv([0.2, -0.1, 0.1], system, 1.0)
        with self.assertRaises(ValueError):
            integrate_lv([0.2, 0.1], system, 1.0)

    @patch("lvevo.lv.ode.solve_ivp")
    def test_step_underflow(self, mock_solve):
        mock_solve.return_value = MagicMock(status=-1, t=np.array([0.0, 0.5]), message="Required step size is less than spacing between numbers.")
        system = LVSystem.from_prey([PreyTrait(2.0, 4.0)], 1.0)
        with self.assertRaises(StiffnessError):
            integrate_lv([0.2, 0.2], system, 1.0)

    def test_helpers(self):
        self.assertTrue(in_gamma([0.5, 0.5, 3.0], 2))
        self.assertFalse(in_gamma([0.6, 0.5, 0.0], 2))
        self.assertEqual(support_of(np.array([0.3, 0.0, 1e-9, 0.2])), frozenset({0, 3}))


if __name__ == "__main__":
    unittest.main()
