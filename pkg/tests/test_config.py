import unittest
from unittest.mock import patch

import numpy as np

from lvevo.core.config import ExperimentConfig
from lvevo.core.rng import RngStream, as_generator, replicate_streams
from lvevo.errors import ConfigError
from lvevo.executor import map_replicates


def _first_draw(params, stream):
    return params["scale"] * stream.generator().random()


class TestExperimentConfig(unittest.TestCase):
    def test_overrides_win_and_skip_none(self):
        cfg = ExperimentConfig.from_mapping(
            {"kind": "apep", "seed": 1, "params": {"epsilon": 0.01}},
            {"seed": 9, "replicates": None, "epsilon": 0.02},
        )
        self.assertEqual(cfg.seed, 9)
        self.assertEqual(cfg.replicates, 1)
        self.assertEqual(cfg.params["epsilon"], 0.02)

    def test_snapshot(self):
        cfg = ExperimentConfig.from_mapping({"kind": "toy", "params": {"M": 4}}, {"out_dir": "x"})
        self.assertEqual(
            cfg.snapshot(),
            {"experiment": {"kind": "toy", "seed": 0, "replicates": 1, "params": {"M": 4}}},
        )

    def test_rejections(self):
        cases = [
            ({"kind": "apep", "params": {"beta": 1.0}}, "beta"),
            ({"kind": "apep", "params": {"epsilon": 0}}, "epsilon"),
            ({"kind": "apep", "params": {"n": 2.5}}, "n"),
            ({"kind": "toy", "params": {"M": "1,0"}}, "M"),
            ({"kind": "apep", "params": {"epsilons": "0.1,-0.2"}}, "epsilons"),
            ({"kind": "apep", "replicates": 0}, "replicates"),
            ({"kind": "apep", "seed": -1}, "seed"),
            ({"kind": "apep", "workers": -2}, "workers"),
            ({"seed": 1}, "kind"),
        ]
        for mapping, field in cases:
            with self.subTest(field=field), self.assertRaises(ConfigError) as ctx:
                ExperimentConfig.from_mapping(mapping)
            self.assertEqual(ctx.exception.field, field)


class TestStreams(unittest.TestCase):
    def test_streams_are_reproducible_and_distinct(self):
        a = [s.generator().random() for s in replicate_streams(7, 3)]
        b = [s.generator().random() for s in replicate_streams(7, 3)]
        self.assertEqual(a, b)
        self.assertEqual(len(set(a)), 3)

    def test_child_lanes_differ(self):
        stream = RngStream(7, 2)
        self.assertNotEqual(stream.child(0).generator().random(), stream.generator().random())
        self.assertEqual(stream.child(0), RngStream(7, 2, 1))

    def test_as_generator(self):
        gen = np.random.default_rng(0)
        self.assertIs(as_generator(gen), gen)
        self.assertEqual(as_generator(RngStream(3)).random(), RngStream(3).generator().random())

    def test_seed_range(self):
        with self.assertRaises(ValueError):
            RngStream(-1)


class TestExecutor(unittest.TestCase):
    def test_inline_keeps_replicate_order(self):
        streams = replicate_streams(5, 4)
        out = map_replicates(_first_draw, {"scale": 2.0}, streams, workers=1)
        self.assertEqual(out, [2.0 * s.generator().random() for s in streams])

    def test_zero_workers_uses_core_count(self):
        with patch("lvevo.executor.default_workers", return_value=1) as cores:
            out = map_replicates(_first_draw, {"scale": 1.0}, replicate_streams(5, 2), workers=0)
        cores.assert_called_once()
        self.assertEqual(len(out), 2)


if __name__ == "__main__":
    unittest.main()
