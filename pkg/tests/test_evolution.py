import dataclasses
import math
import os
import unittest
from unittest.mock import patch

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from lvevo.core.config import CANONICAL_DRIFT
from lvevo.errors import BudgetExceeded, NotCoexisting, NotViable
from lvevo.evolution.apep import APEPState, apep_step, count_bound, run_apep
from lvevo.evolution.canonical import canonical_ode, rescaled_mean_path, sup_distance
from lvevo.evolution.dpep import RESYNC_EVERY, DPEPState, dpep_step, run_dpep
from lvevo.evolution.events import EventLog
from lvevo.evolution.predator_ep import PredatorEPState, predator_ep_step, run_predator_ep
from lvevo.evolution.prey_ep import (
    PreyEPState,
    coexistence_probability,
    prey_ep_step,
    run_prey_ep,
    sample_disk,
)
from lvevo.lv.predator import (
    check_fixed_alpha,
    check_fixed_delta,
    coexistence_guarantee_level,
    coexisting_prefix,
    fixed_delta_margins,
    fixed_delta_prefix,
)
from lvevo.lv.prey import invadability_curvature, invadability_curves, invasion_fitness, is_viable
from lvevo.lv.traits import PredatorTrait, PreyTrait, SystemParams
from lvevo.replay import replay

SLOW = os.getenv("LVEVO_SLOW")
PARAMS = SystemParams.from_r(1.0)
RESIDENT = PreyTrait(2.0, 4.0)


def _rows(events):
    return [rec.as_row() for rec in events]


class TestPreyEP(unittest.TestCase):
    def test_disk_samples_stay_inside(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            x, y = sample_disk(rng, 0.3)
            self.assertLessEqual(x * x + y * y, 0.09 + 1e-15)

    def test_same_seed_same_log(self):
        a = run_prey_ep(RESIDENT, 1.0, 0.05, 40.0, np.random.default_rng(11))
        b = run_prey_ep(RESIDENT, 1.0, 0.05, 40.0, np.random.default_rng(11))
        self.assertEqual(_rows(a.events), _rows(b.events))
        np.testing.assert_array_equal(a.y1, b.y1)

    def test_log_starts_with_initial_state(self):
        run = run_prey_ep(RESIDENT, 1.0, 0.05, 5.0, np.random.default_rng(1))
        first = run.events.records[0]
        self.assertEqual((first.event_index, first.time, first.parent_index), (0, 0.0, -1))
        self.assertEqual((first.mutant_field_1, first.mutant_field_2, first.survivors), (2.0, 4.0, 1))

    def test_two_live_prey_invade_each_other(self):
        rng = np.random.default_rng(3)
        state = PreyEPState(y1=RESIDENT, delta=1.0, epsilon=0.05)
        pairs = 0
        for _ in range(3000):
            prey_ep_step(state, rng)
            self.assertFalse(state.absorbed)
            live = state.live
            self.assertIn(len(live), (1, 2))
            if len(live) == 2 and all(is_viable(y, 1.0) for y in live):
                pairs += 1
                self.assertGreater(invasion_fitness(live[0], live[1], 1.0), 0.0)
                self.assertGreater(invasion_fitness(live[1], live[0], 1.0), 0.0)
        self.assertGreater(pairs, 0)

    def test_clock_stops_at_horizon(self):
        state = PreyEPState(y1=RESIDENT, delta=1.0, epsilon=0.01)
        rng = np.random.default_rng(2)
        while state.clock < 3.0:
            prey_ep_step(state, rng, horizon=3.0)
        self.assertEqual(state.clock, 3.0)

    def test_no_absorption_and_rarely_two_prey(self):
        eps = 0.01
        fractions = []
        for seed in range(20):
            run = run_prey_ep(RESIDENT, 1.0, eps, 2.0 / eps, np.random.default_rng(seed), record_events=False)
            self.assertFalse(run.state.absorbed)
            fractions.append(run.two_prey_fraction)
        self.assertLess(np.mean(fractions), 0.1)

    @unittest.skipUnless(SLOW, "set LVEVO_SLOW=1 for acceptance-scale runs")
    def test_monomorphic_with_poisson_coexistence_events(self):
        from lvevo.analysis import dispersion_test

        eps, horizon = 0.01, 200.0
        runs = [
            run_prey_ep(RESIDENT, 1.0, eps, horizon, np.random.default_rng(seed), record_events=False)
            for seed in range(200)
        ]
        self.assertLess(np.mean([r.two_prey_fraction for r in runs]), 0.05)
        index = dispersion_test([r.state.coexistence_event_times for r in runs], horizon)
        self.assertGreaterEqual(index, 0.8)
        self.assertLessEqual(index, 1.25)

    def test_rejects_non_viable_start(self):
        with self.assertRaises(NotViable):
            PreyEPState(y1=PreyTrait(1.5, 2.0), delta=1.0, epsilon=0.01)

    def test_rejects_unknown_clock(self):
        with self.assertRaises(ValueError):
            PreyEPState(y1=RESIDENT, delta=1.0, epsilon=0.01, clock_mode="discrete")

    def test_y1_is_a_step_function(self):
        run = run_prey_ep(RESIDENT, 1.0, 0.05, 20.0, np.random.default_rng(4))
        np.testing.assert_array_equal(run.y1_at([0.0]), [[2.0, 4.0]])
        np.testing.assert_array_equal(run.y1_at([20.0])[0], run.y1[-1])


class TestPreyWithoutPredator(unittest.TestCase):
    # viable, but only just: the predator's equilibrium density is tiny
    EDGE = PreyTrait(2.0, 2.01)

    def _lose_predator(self, events=None):
        state = PreyEPState(y1=self.EDGE, delta=1.0, epsilon=0.06)
        with patch("lvevo.evolution.prey_ep.sample_disk", return_value=(-0.05, 0.02)):
            prey_ep_step(state, np.random.default_rng(30), events)
        return state

    def test_lone_survivor_keeps_running(self):
        state = self._lose_predator()
        self.assertFalse(state.absorbed)
        self.assertFalse(state.predator)
        self.assertEqual(len(state.live), 1)
        self.assertAlmostEqual(state.y1.alpha, 1.95, places=12)
        self.assertAlmostEqual(state.y1.beta, 2.03, places=12)
        self.assertFalse(is_viable(state.y1, 1.0))

        rng = np.random.default_rng(31)
        for _ in range(20):
            prey_ep_step(state, rng)
        self.assertFalse(state.absorbed)
        self.assertEqual(state.mutations, 21)
        self.assertGreaterEqual(len(state.live), 1)

    def test_replay_accepts_lone_survivor(self):
        events = EventLog("prey-ep")
        events.record(0.0, -1, self.EDGE.alpha, self.EDGE.beta, 1)
        self._lose_predator(events)
        self.assertEqual(events.records[-1].survivors, 1)
        report = replay(list(events), "prey-ep", {"delta": 1.0})
        self.assertTrue(report.clean, report.summary())

        records = list(events)
        records[1] = dataclasses.replace(records[1], survivors=0)
        report = replay(records, "prey-ep", {"delta": 1.0})
        self.assertEqual(report.first_violation.line, 3)


class TestCoexistenceProbability(unittest.TestCase):
    def test_linear_in_epsilon(self):
        p1, _ = coexistence_probability(RESIDENT, 1.0, 0.02, 200_000, np.random.default_rng(5))
        p2, _ = coexistence_probability(RESIDENT, 1.0, 0.04, 200_000, np.random.default_rng(6))
        self.assertGreater(p1, 0.0)
        self.assertAlmostEqual(p2 / p1, 2.0, delta=0.3)

    def test_matches_wedge_area(self):
        # the coexistence wedge around the tangent has area curvature * cos^3 * eps^3 / 3
        eps = 0.02
        kappa = invadability_curvature(RESIDENT, 1.0)
        step = 1e-4
        g_hi, _ = invadability_curves(RESIDENT, RESIDENT.alpha + step, 1.0)
        g_lo, _ = invadability_curves(RESIDENT, RESIDENT.alpha - step, 1.0)
        cos = 1.0 / math.sqrt(1.0 + ((g_hi - g_lo) / (2 * step)) ** 2)
        expected = kappa * cos**3 * eps / (3.0 * math.pi)
        p, _ = coexistence_probability(RESIDENT, 1.0, eps, 400_000, np.random.default_rng(7))
        self.assertGreater(kappa, 0.0)
        self.assertAlmostEqual(p / expected, 1.0, delta=0.2)

    def test_requires_viable_resident(self):
        with self.assertRaises(NotViable):
            coexistence_probability(PreyTrait(1.5, 2.0), 1.0, 0.01, 10, np.random.default_rng(0))


class TestPredatorEP(unittest.TestCase):
    START = PredatorTrait(3.0, 0.45)

    def test_state_always_coexists(self):
        rng = np.random.default_rng(8)
        state = PredatorEPState([self.START], PARAMS, 0.05)
        events = EventLog("predator-ep")
        for _ in range(1500):
            predator_ep_step(state, rng, events)
            ells = [x.ell for x in state.predators]
            self.assertEqual(ells, sorted(ells))
            self.assertEqual(coexisting_prefix(state.predators, PARAMS), len(state.predators))
        self.assertEqual(events.records[-1].survivors, len(state.predators))

    def test_same_seed_same_log(self):
        a = run_predator_ep(self.START, PARAMS, 0.02, 500, np.random.default_rng(9))
        b = run_predator_ep(self.START, PARAMS, 0.02, 500, np.random.default_rng(9))
        self.assertEqual(_rows(a.events), _rows(b.events))

    def test_snapshots_and_counts(self):
        run = run_predator_ep(self.START, PARAMS, 0.02, 300, np.random.default_rng(10), snapshot_at=[100, 300])
        self.assertEqual(sorted(run.snapshots), [100, 300])
        self.assertEqual(run.counts.size, 301)
        self.assertEqual(run.snapshots[300].shape, (run.counts[-1], 2))

    def test_ell_drifts_down(self):
        run = run_predator_ep(self.START, PARAMS, 0.05, 4000, np.random.default_rng(12), record_events=False)
        self.assertLess(run.mean_log_ell[-1], run.mean_log_ell[0])

    def test_rejects_non_coexisting_start(self):
        with self.assertRaises(NotCoexisting):
            PredatorEPState([PredatorTrait(1.0, 0.3), PredatorTrait(1.0, 0.45)], SystemParams(beta=2.0), 0.01)


class TestAPEP(unittest.TestCase):
    def test_postconditions_after_every_step(self):
        rng = np.random.default_rng(13)
        state = APEPState(np.array([3.0]), PARAMS, 0.05)
        for n in range(1, 2001):
            apep_step(state, rng)
            self.assertEqual(state.step_count, n)
            self.assertEqual(state.clock, float(n))
            self.assertTrue(np.all(np.diff(state.alphas) < 0))
            self.assertTrue(check_fixed_delta(state.alphas, PARAMS))
            d = state.differences
            self.assertGreaterEqual(d.min(), 0.0)
            self.assertLess(d.max(), PARAMS.r)

    def test_count_bound(self):
        eps = 0.01
        run = run_apep(3.0, PARAMS, eps, 5000, np.random.default_rng(14), record_events=False)
        self.assertEqual(count_bound(PARAMS, eps), 400)
        self.assertLessEqual(int(run.counts.max()), count_bound(PARAMS, eps))

    def test_alpha_min_grows(self):
        run = run_apep(3.0, PARAMS, 0.05, 3000, np.random.default_rng(15), record_every=100)
        self.assertGreater(run.alpha_min[-1], 3.0)
        self.assertTrue(np.all(run.max_spacing >= 0))
        self.assertEqual(len(run.events), 3001)

    def test_continuous_clock(self):
        run = run_apep(3.0, PARAMS, 0.05, 200, np.random.default_rng(16), clock_mode="per_capita")
        self.assertTrue(np.all(np.diff(run.times) > 0))

    @unittest.skipUnless(SLOW, "set LVEVO_SLOW=1 for acceptance-scale runs")
    def test_speed_settles_over_seeds(self):
        from lvevo.analysis import TrajectorySample, slope_estimate

        speeds = []
        for seed in range(10):
            run = run_apep(3.0, PARAMS, 0.01, 50_000, np.random.default_rng(seed), record_every=10, record_events=False)
            self.assertLessEqual(int(run.counts.max()), 400)
            speeds.append(slope_estimate(TrajectorySample(run.steps, run.alpha_min))[0])
        mean = np.mean(speeds)
        self.assertGreater(mean, 0.0)
        self.assertLess(np.std(speeds, ddof=1) / math.sqrt(len(speeds)) / mean, 0.1)

    @unittest.skipUnless(SLOW, "set LVEVO_SLOW=1 for acceptance-scale runs")
    def test_small_epsilon_scaling(self):
        from lvevo.analysis import scaling_regression

        counts, spreads = [], []
        for i, eps in enumerate((0.00125, 0.0025, 0.005, 0.01)):
            run = run_apep(3.0, PARAMS, eps, 50_000, np.random.default_rng(100 + i), record_every=10, record_events=False)
            window = run.steps > 25_000
            counts.append((eps, 1.0 / run.counts[window].mean()))
            spreads.append((eps, run.max_spacing[window].mean()))
        self.assertAlmostEqual(scaling_regression(counts).exponent, 1.0, delta=0.15)
        self.assertAlmostEqual(scaling_regression(spreads).exponent, 1.0, delta=0.15)

    @settings(deadline=None, max_examples=60)
    @given(st.lists(st.floats(0.5, 5.0), min_size=1, max_size=12, unique=True), st.floats(0.2, 3.0))
    def test_largest_prefix_is_drop_worst(self, alphas, r):
        params = SystemParams.from_r(r)
        alphas = sorted(alphas, reverse=True)
        assume(np.all(np.abs(fixed_delta_margins(alphas, params)) > 1e-9))
        k = len(alphas)
        while k > 0 and not check_fixed_delta(alphas[:k], params):
            k -= 1
        self.assertEqual(fixed_delta_prefix(alphas, params), k)


class TestDPEP(unittest.TestCase):
    def test_invariants_after_every_step(self):
        rng = np.random.default_rng(17)
        state = DPEPState.start([1.0], PARAMS)
        x_max, guaranteed = state.x_max, state.guaranteed_count
        for _ in range(3000):
            dpep_step(state, rng)
            xs = state.positions()
            self.assertTrue(np.all(np.diff(xs) < 0))
            self.assertTrue(check_fixed_alpha(xs, PARAMS))
            self.assertGreaterEqual(state.x_max, x_max)
            self.assertGreaterEqual(state.guaranteed_count, guaranteed)
            x_max, guaranteed = state.x_max, state.guaranteed_count
        brute = 0
        for m in range(1, state.n_types + 1):
            if state.x_at(m - 1) > coexistence_guarantee_level(m, PARAMS):
                brute = m
            else:
                break
        self.assertEqual(state.guaranteed_count, brute)
        self.assertGreater(state.insertions, RESYNC_EVERY)
        self.assertAlmostEqual(state._weight, math.fsum(np.exp(-xs)), delta=1e-9 * state._weight)

    def test_truncation_removes_smallest(self):
        state = DPEPState.start([0.8], PARAMS)
        removed = state.insert(3.0)
        self.assertEqual(removed, [0.8])
        np.testing.assert_array_equal(state.positions(), [3.0])

    def test_keeps_one_type(self):
        state = DPEPState.start([0.8], PARAMS)
        self.assertEqual(state.insert(-10.0), [-10.0])
        np.testing.assert_array_equal(state.positions(), [0.8])

    def test_same_seed_same_log(self):
        a = run_dpep(PARAMS, 5.0, np.random.default_rng(18))
        b = run_dpep(PARAMS, 5.0, np.random.default_rng(18))
        self.assertEqual(_rows(a.events), _rows(b.events))
        self.assertEqual(a.times[-1], b.times[-1])

    def test_population_grows(self):
        run = run_dpep(PARAMS, 10.0, np.random.default_rng(19), record_events=False)
        self.assertGreater(run.counts[-1], 10)
        self.assertTrue(np.all(np.diff(run.x_max) >= 0))
        self.assertGreater(run.log_count_rate, 0.0)

    def test_budget_exceeded_carries_partial_run(self):
        with self.assertRaises(BudgetExceeded) as ctx:
            run_dpep(PARAMS, 50.0, np.random.default_rng(20), max_events=200)
        partial = ctx.exception.partial
        self.assertEqual(partial.state.insertions, 200)
        self.assertLess(partial.times[-1], 50.0)

    def test_rejects_non_coexisting_start(self):
        with self.assertRaises(NotCoexisting):
            DPEPState.start([-5.0], PARAMS)

    @unittest.skipUnless(SLOW, "set LVEVO_SLOW=1 for acceptance-scale runs")
    def test_front_speeds_at_scale(self):
        from lvevo.analysis import TrajectorySample, slope_estimate
        from lvevo.brw.rates import solve_speed_a, solve_speed_b

        hi, lo, rates = [], [], []
        for seed in range(20):
            run = run_dpep(PARAMS, 20.0, np.random.default_rng(seed), record_events=False, sample_every=10)
            hi.append(slope_estimate(TrajectorySample(run.times, run.x_max))[0])
            lo.append(slope_estimate(TrajectorySample(run.times, run.x_min))[0])
            rates.append(run.log_count_rate)
        self.assertAlmostEqual(np.mean(hi), solve_speed_a(), delta=0.05)
        self.assertAlmostEqual(np.mean(lo), solve_speed_b(), delta=0.06)
        self.assertGreaterEqual(np.mean(rates), solve_speed_b() - 0.1)


class TestCanonical(unittest.TestCase):
    def test_initial_speed(self):
        path = canonical_ode(RESIDENT, 1.0, 1e-3, times=[0.0, 1e-3])
        speed = np.linalg.norm(path.traits[1] - path.traits[0]) / 1e-3
        self.assertAlmostEqual(speed, CANONICAL_DRIFT, delta=1e-4)
        self.assertAlmostEqual(CANONICAL_DRIFT, 2.0 / (3.0 * math.pi), places=15)

    def test_birth_rate_rises_consumption_falls(self):
        path = canonical_ode(RESIDENT, 1.0, 2.0)
        self.assertTrue(np.all(np.diff(path.traits[:, 1]) > 0))
        self.assertTrue(np.all(np.diff(path.traits[:, 0]) < 0))

    def test_rejects_non_viable_start(self):
        with self.assertRaises(NotViable):
            canonical_ode(PreyTrait(1.5, 2.0), 1.0, 1.0)

    def test_sup_distance_to_itself(self):
        grid = np.linspace(0.0, 1.0, 11)
        path = canonical_ode(RESIDENT, 1.0, 1.0)
        self.assertEqual(sup_distance(path.at(grid), path, grid), 0.0)

    def test_rescaled_mean_of_identical_runs(self):
        run = run_prey_ep(RESIDENT, 1.0, 0.05, 20.0, np.random.default_rng(21))
        grid = np.linspace(0.0, 1.0, 5)
        np.testing.assert_allclose(rescaled_mean_path([run, run], 0.05, grid), run.y1_at(grid / 0.05))

    @unittest.skipUnless(SLOW, "set LVEVO_SLOW=1 for acceptance-scale runs")
    def test_tracks_prey_process(self):
        eps, horizon = 0.01, 2.0
        grid = np.linspace(0.0, horizon, 41)
        runs = [
            run_prey_ep(RESIDENT, 1.0, eps, horizon / eps, np.random.default_rng(seed), record_events=False)
            for seed in range(20)
        ]
        mean = rescaled_mean_path(runs, eps, grid)
        self.assertLess(sup_distance(mean, canonical_ode(RESIDENT, 1.0, horizon), grid), 0.1)


if __name__ == "__main__":
    unittest.main()
