import math
import unittest

import numpy as np

from ks_flowlab.errors import InvalidInputError, UnknownTagError
from ks_flowlab.fields import VectorField
from ks_flowlab.maps import MetricMap, sector_singular_distance
from ks_flowlab.metric_core import TargetSpace


class AffineMapTestCase(unittest.TestCase):

    def test_identity(self):
        u = MetricMap.identity(TargetSpace.normed(2))
        np.testing.assert_allclose(u((0.3, -0.2)), [0.3, -0.2])
        np.testing.assert_allclose(u.matrix, np.eye(2))
        self.assertEqual(u.name, 'identity')

    def test_affine_oracle(self):
        target = TargetSpace.normed(2, 'l1')
        u = MetricMap.from_tag('affine(1,2,0,1)', target)
        np.testing.assert_allclose(u(np.array([[1.0, 1.0]])), [[3.0, 1.0]])
        translation = VectorField.translation((0.0, 1.0))
        np.testing.assert_allclose(u.oracle(np.zeros((2, 2)), translation),
                                   [3.0, 3.0])

    def test_affine_needs_normed_target(self):
        with self.assertRaises(InvalidInputError):
            MetricMap.affine(np.eye(2), TargetSpace.tripod())
        with self.assertRaises(InvalidInputError):
            MetricMap.affine(np.eye(3), TargetSpace.normed(2))

    def test_constant(self):
        u = MetricMap.from_tag('constant', TargetSpace.tripod())
        np.testing.assert_allclose(u((0.5, 0.5)), [0.0, 0.0])
        rotation = VectorField.rotation(1.0)
        np.testing.assert_allclose(u.oracle(np.ones((3, 2)), rotation), 0.0)
        self.assertIsNone(u.matrix)

    def test_unknown_tags(self):
        target = TargetSpace.normed(2)
        with self.assertRaises(UnknownTagError):
            MetricMap.from_tag('harmonic', target)
        with self.assertRaises(UnknownTagError):
            MetricMap.from_tag('affine(1,2)', target)
        with self.assertRaises(InvalidInputError):
            MetricMap.from_tag('affine(1,2,x,1)', target)


class SectorMapTestCase(unittest.TestCase):

    def setUp(self):
        self.u = MetricMap.sector(TargetSpace.tripod())

    def test_values(self):
        x = np.array([[math.cos(math.pi / 6), math.sin(math.pi / 6)],
                      [2 * math.cos(math.pi), 2 * math.sin(math.pi)]])
        values = self.u(x)
        np.testing.assert_allclose(values[0], [0.0, 0.5], atol=1e-12)
        self.assertEqual(values[1][0], 1.0)
        self.assertAlmostEqual(values[1][1], 2 * math.sin(math.pi / 3))

    def test_rays_go_to_root(self):
        angle = 2 * math.pi / 3
        x = np.array([[math.cos(angle), math.sin(angle)]])
        self.assertAlmostEqual(float(self.u(x)[0][1]), 0.0, places=12)

    def test_oracle(self):
        x = np.array([[math.cos(math.pi / 6), math.sin(math.pi / 6)]])
        e1 = VectorField.translation((1.0, 0.0))
        e2 = VectorField.translation((0.0, 1.0))
        self.assertAlmostEqual(float(self.u.oracle(x, e1)[0]), 0.0)
        self.assertAlmostEqual(float(self.u.oracle(x, e2)[0]), 1.0)

    def test_needs_tree(self):
        with self.assertRaises(InvalidInputError):
            MetricMap.sector(TargetSpace.normed(2))
        with self.assertRaises(InvalidInputError):
            MetricMap.sector(TargetSpace.star_tree(2))

    def test_singular_distance(self):
        x = np.array([[1.0, 0.0],
                      [math.cos(math.pi / 6), math.sin(math.pi / 6)],
                      [0.0, 0.0]])
        np.testing.assert_allclose(sector_singular_distance(x), [0.0, 0.5, 0.0],
                                   atol=1e-12)
