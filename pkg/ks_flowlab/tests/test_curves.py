import math
import os
import shutil
import tempfile
import unittest

import numpy as np

from ks_flowlab.curves import SampledCurve, chain_rule_check, curve_energy, \
    curve_energy_eps, metric_speed, metric_speeds, read_curve_csv, \
    speed_convergence_order, subadditivity_gap, write_curve_csv
from ks_flowlab.errors import InvalidInputError
from ks_flowlab.metric_core import TargetSpace


def circle(times):
    return np.column_stack([np.cos(times), np.sin(times)])


class CurveEnergyTestCase(unittest.TestCase):

    def setUp(self):
        self.l2 = TargetSpace.normed(2)
        self.circle = SampledCurve.from_function(circle, 2 * math.pi, 4096,
                                                 self.l2)

    def test_circle_closed_form(self):
        eps = math.pi / 8
        for p in (2.0, 3.0, 1.5):
            expected = (2 * math.pi - eps) * (2 * math.sin(eps / 2) / eps) ** p
            self.assertAlmostEqual(curve_energy_eps(self.circle, p, eps),
                                   expected, delta=1e-3)

    def test_line(self):
        line = SampledCurve.from_function(lambda t: t, 1.0, 1024,
                                          TargetSpace.normed(1))
        for eps in (0.25, 2.0 ** -6):
            self.assertAlmostEqual(curve_energy_eps(line, 2.0, eps), 1 - eps,
                                   places=9)

    def test_constant_curve(self):
        constant = SampledCurve(np.zeros((65, 2)), 1.0 / 64, self.l2)
        self.assertEqual(curve_energy_eps(constant, 2.0, 0.25), 0.0)

    def test_profile_monotone(self):
        eps = [math.pi / 2 ** k for k in range(1, 7)]
        profile = curve_energy(self.circle, 2.0, eps)
        self.assertLessEqual(profile.monotonicity_violation(), 0.0)
        self.assertTrue(np.all(np.diff(profile.tail()) < 0))
        self.assertAlmostEqual(profile.energy, 2 * math.pi,
                               delta=0.01 * 2 * math.pi)
        # the list is sorted coarse to fine whatever the input order
        reversed_profile = curve_energy(self.circle, 2.0, eps[::-1])
        np.testing.assert_array_equal(reversed_profile.values, profile.values)

    def test_subadditivity(self):
        for eps in (math.pi / 4, math.pi / 32):
            self.assertLessEqual(
                subadditivity_gap(self.circle, 2.0, eps, (0.5, 0.5)),
                self.circle.dt)
        self.assertLessEqual(
            subadditivity_gap(self.circle, 2.0, math.pi / 4, (0.25, 0.75)),
            self.circle.dt)
        with self.assertRaises(InvalidInputError):
            subadditivity_gap(self.circle, 2.0, math.pi / 4, (0.5, 0.6))

    def test_invalid_arguments(self):
        with self.assertRaises(InvalidInputError):
            curve_energy_eps(self.circle, 1.0, math.pi / 8)
        with self.assertRaises(InvalidInputError):
            curve_energy_eps(self.circle, 2.0, 7.0)
        with self.assertRaises(InvalidInputError):
            curve_energy_eps(self.circle, 2.0, 0.1)
        with self.assertRaises(InvalidInputError):
            curve_energy(self.circle, 2.0, [])
        with self.assertRaises(InvalidInputError):
            SampledCurve(np.zeros((2, 2)), 0.1, self.l2)


class MetricSpeedTestCase(unittest.TestCase):

    def test_circle_speed(self):
        curve = SampledCurve.from_function(circle, 2 * math.pi, 4096,
                                           TargetSpace.normed(2))
        np.testing.assert_allclose(metric_speeds(curve)[1:-1], 1.0,
                                   atol=1e-5)
        self.assertAlmostEqual(metric_speed(curve, 100), 1.0, places=5)
        with self.assertRaises(InvalidInputError):
            metric_speed(curve, 5000)

    def test_convergence_order(self):
        order = speed_convergence_order(circle, 2 * math.pi, 512,
                                        TargetSpace.normed(2),
                                        lambda t: np.ones_like(t))
        self.assertAlmostEqual(order, 2.0, delta=0.1)

    def test_tree_geodesic_speed(self):
        def path(times):
            return np.column_stack([np.where(times <= 1.0, 0.0, 1.0),
                                    np.abs(1.0 - times)])
        curve = SampledCurve.from_function(path, 2.0, 2048,
                                           TargetSpace.tripod())
        speeds = metric_speeds(curve)
        away = np.abs(curve.times - 1.0) > 2 * curve.dt
        np.testing.assert_allclose(speeds[away], 1.0, atol=1e-6)
        self.assertAlmostEqual(curve_energy_eps(curve, 2.0, 0.25), 1.75,
                               places=9)

    def test_chain_rule(self):
        curve = SampledCurve.from_function(circle, 2 * math.pi, 1024,
                                           TargetSpace.normed(2))
        violation = chain_rule_check(
            curve, lambda y: np.linalg.norm(y, axis=1),
            lambda y: np.ones(len(y)), TargetSpace.normed(1))
        self.assertLessEqual(violation, 1e-9)
        violation = chain_rule_check(curve, lambda y: 3 * y,
                                     lambda y: np.full(len(y), 3.0),
                                     TargetSpace.normed(2))
        self.assertLessEqual(violation, 1e-9)


class CurveCsvTestCase(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_write_and_read(self):
        curve = SampledCurve.from_function(circle, 1.0, 64,
                                           TargetSpace.normed(2))
        path = os.path.join(self.tmpdir, 'circle.csv')
        write_curve_csv(curve, path)
        loaded = read_curve_csv(path, TargetSpace.normed(2))
        np.testing.assert_array_equal(loaded.values, curve.values)
        self.assertAlmostEqual(loaded.dt, curve.dt, places=15)

    def test_nonuniform_grid(self):
        path = os.path.join(self.tmpdir, 'bad.csv')
        with open(path, 'w') as handle:
            handle.write('t,y0\n0,0\n0.1,1\n0.3,2\n')
        with self.assertRaises(InvalidInputError):
            read_curve_csv(path, TargetSpace.normed(1))
