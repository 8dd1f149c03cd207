import os
import unittest

from ks_flowlab.errors import InvalidInputError
from ks_flowlab.scenario_config import KNOBS, ScenarioConfig

DATA = os.path.join(os.path.dirname(__file__), 'data')


class ScenarioConfigTestCase(unittest.TestCase):

    def test_defaults(self):
        config = ScenarioConfig()
        self.assertEqual(config.scenario, 'rotation-energy')
        self.assertEqual(config.p, 2.0)
        self.assertEqual(config['grid'], 64)
        self.assertEqual(config.explicit, [])
        self.assertEqual(list(config.as_dict()), list(KNOBS))
        with self.assertRaises(AttributeError):
            config.radius

    def test_parse(self):
        config = ScenarioConfig.parse(
            "# header\n"
            "scenario = parallelogram\n"
            "\n"
            "eps = 0.25, 0.125   # two scales\n"
            "levels = 2,4\n"
            "samples = 1e3\n")
        self.assertEqual(config.scenario, 'parallelogram')
        self.assertEqual(config.eps, (0.25, 0.125))
        self.assertEqual(config.levels, (2, 4))
        self.assertEqual(config.samples, 1000)
        self.assertEqual(config.explicit,
                         ['scenario', 'samples', 'eps', 'levels'])

    def test_malformed_lines(self):
        with self.assertRaises(InvalidInputError):
            ScenarioConfig.parse("p = 2\np = 3\n")
        with self.assertRaises(InvalidInputError):
            ScenarioConfig.parse("scenario parallelogram\n")
        with self.assertRaises(InvalidInputError):
            ScenarioConfig.parse("radius = 2\n")
        with self.assertRaises(InvalidInputError):
            ScenarioConfig.parse("samples = 10.5\n")
        with self.assertRaises(InvalidInputError):
            ScenarioConfig.parse("samples = many\n")

    def test_invalid_values(self):
        with self.assertRaises(InvalidInputError):
            ScenarioConfig({'p': 1.0})
        with self.assertRaises(InvalidInputError):
            ScenarioConfig({'eps': (0.1, 0.2)})
        with self.assertRaises(InvalidInputError):
            ScenarioConfig({'eps': (0.1, -0.05)})
        with self.assertRaises(InvalidInputError):
            ScenarioConfig({'domain': 'sphere(1)'})
        with self.assertRaises(InvalidInputError):
            ScenarioConfig({'samples': 0})
        with self.assertRaises(InvalidInputError):
            ScenarioConfig({'scenario': 'Rotation Energy'})

    def test_int_for_float_knob(self):
        config = ScenarioConfig({'p': 3, 'h': 1})
        self.assertIsInstance(config.p, float)
        self.assertIsInstance(config.h, float)
        self.assertEqual(config.p, 3.0)

    def test_dumps_parse(self):
        config = ScenarioConfig({'scenario': 'tree-target',
                                 'target': 'tripod', 'map': 'sector',
                                 'eps': (0.125, 0.0625), 'alphas': (0.5, -1.0),
                                 'h': 2.0 ** -9})
        self.assertEqual(ScenarioConfig.parse(config.dumps()), config)
        self.assertNotEqual(config, ScenarioConfig())

    def test_load(self):
        config = ScenarioConfig.load(os.path.join(DATA, 'rotation_small.cfg'))
        self.assertEqual(config.samples, 20000)
        self.assertEqual(config.seed, 7)
        self.assertEqual(config.eps, (2.0 ** -6, 2.0 ** -7, 2.0 ** -8))
        self.assertEqual(config.p, 2.0)
        with self.assertRaises(InvalidInputError):
            ScenarioConfig.load(os.path.join(DATA, 'unknown_key.cfg'))

    def test_overrides_and_defaults(self):
        config = ScenarioConfig({'seed': 3})
        overridden = config.with_overrides(seed=None, threads=4)
        self.assertEqual(overridden.seed, 3)
        self.assertEqual(overridden.threads, 4)
        self.assertEqual(config.threads, 1)
        filled = config.with_defaults({'seed': 9, 'grid': 16})
        self.assertEqual(filled.seed, 3)
        self.assertEqual(filled.grid, 16)

    def test_validate(self):
        config = ScenarioConfig({'map': 'sector'})
        with self.assertRaises(InvalidInputError):
            config.validate()
        config = ScenarioConfig({'map': 'sector', 'target': 'tripod'})
        self.assertIs(config.validate(), config)

    def test_to_json(self):
        document = ScenarioConfig({'levels': (2, 8)}).to_json()
        self.assertEqual(document['levels'], [2, 8])
        self.assertEqual(document['map'], 'identity')
