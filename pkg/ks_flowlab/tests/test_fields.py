import math
import unittest

import numpy as np

from ks_flowlab.errors import InvalidInputError, UnknownTagError
from ks_flowlab.fields import Mollifier, TimeDependentField, VectorField, \
    field_l1_distance, mollify_field, steps_for, trotter_field
from ks_flowlab.metric_core import SourceDomain, sample_measure


class VectorFieldTestCase(unittest.TestCase):

    def setUp(self):
        self.points = np.array([[1.0, 0.0], [0.0, 0.5], [0.3, -0.4]])

    def test_rotation(self):
        rotation = VectorField.rotation(1.0)
        np.testing.assert_allclose(rotation(self.points),
                                   [[0.0, 1.0], [-0.5, 0.0], [0.4, 0.3]])
        np.testing.assert_allclose(rotation.divergence(self.points), 0.0)
        self.assertTrue(rotation.satisfies_bounds(self.points))
        self.assertTrue(rotation.reversible)

    def test_bounds_violated(self):
        rotation = VectorField.rotation(0.5)
        sup_excess, _ = rotation.verify_bounds(self.points)
        self.assertAlmostEqual(sup_excess, 0.5)
        self.assertFalse(rotation.satisfies_bounds(self.points))

    def test_combination_bounds(self):
        total = VectorField.rotation(1.0) + VectorField.translation((0.3, 0))
        self.assertAlmostEqual(total.sup_norm, 1.3)
        np.testing.assert_allclose(total(self.points[0]), [0.3, 1.0])
        self.assertTrue(total.satisfies_bounds(self.points))

    def test_negated_contraction(self):
        contraction = VectorField.contraction(1.0)
        self.assertEqual(contraction.div_neg_bound, 2.0)
        expansion = -contraction
        self.assertEqual(expansion.div_neg_bound, 0.0)
        self.assertEqual(expansion.div_pos_bound, 2.0)
        np.testing.assert_allclose(expansion(self.points), self.points)

    def test_irreversible_field(self):
        field = VectorField(lambda pts: -pts, lambda pts: np.full(len(pts),
                                                                   -2.0),
                            1.0, 2.0, 1.0)
        self.assertFalse(field.reversible)
        with self.assertRaises(InvalidInputError):
            field.scaled(-1.0)

    def test_scaling(self):
        rotation = VectorField.rotation(1.0)
        self.assertIs(rotation.scaled(1.0), rotation)
        self.assertEqual(rotation.scaled(0.0).sup_norm, 0.0)
        np.testing.assert_allclose((2.0 * rotation)(self.points),
                                   2 * rotation(self.points))
        self.assertAlmostEqual((rotation - rotation).sup_norm, 0.0)

    def test_from_tag(self):
        domain = SourceDomain.disk(2)
        self.assertEqual(VectorField.from_tag('rotation', domain).sup_norm,
                         2.0)
        translation = VectorField.from_tag('translation(0.3,0)')
        np.testing.assert_allclose(translation(self.points[1]), [0.3, 0.0])
        self.assertEqual(VectorField.from_tag('shear(2)').lip_bound, 2.0)
        with self.assertRaises(UnknownTagError):
            VectorField.from_tag('vortex')
        with self.assertRaises(InvalidInputError):
            VectorField.from_tag('translation(a,b)')


class TimeDependentFieldTestCase(unittest.TestCase):

    def test_trotter_field(self):
        rotation = VectorField.rotation(1.0)
        translation = VectorField.translation((0.3, 0.0))
        field = trotter_field(rotation, translation, 2)
        self.assertEqual(len(field), 4)
        np.testing.assert_allclose(field.switching_times, [0.25, 0.5, 0.75])
        x = np.array([[0.5, 0.5]])
        np.testing.assert_allclose(field.field_at(0.1)(x), 2 * rotation(x))
        np.testing.assert_allclose(field.field_at(0.3)(x),
                                   2 * translation(x))
        np.testing.assert_allclose(field.field_at(0.5)(x), 2 * rotation(x))
        self.assertTrue(field.aligned_with(2.0 ** -10))
        self.assertFalse(field.aligned_with(0.3))
        with self.assertRaises(InvalidInputError):
            trotter_field(rotation, translation, 0)

    def test_div_neg_integral(self):
        field = TimeDependentField.constant(VectorField.contraction(1.0), 0.5)
        self.assertAlmostEqual(field.div_neg_integral, 1.0)

    def test_pieces_must_partition(self):
        rotation = VectorField.rotation(1.0)
        with self.assertRaises(InvalidInputError):
            TimeDependentField([(0.0, 0.5, rotation), (0.6, 1.0, rotation)])
        with self.assertRaises(InvalidInputError):
            TimeDependentField([(0.1, 1.0, rotation)])
        with self.assertRaises(InvalidInputError):
            TimeDependentField([])

    def test_steps_for(self):
        self.assertEqual(steps_for(1.0, 2.0 ** -10), 1024)
        self.assertIsNone(steps_for(1.0, 0.3))


class MollifierTestCase(unittest.TestCase):

    def test_unit_mass(self):
        for mollifier in (Mollifier.bump(0.05), Mollifier.hat(0.1)):
            s = np.linspace(-0.2, 0.2, 400001)
            mass = np.sum(mollifier(s)) * (s[1] - s[0])
            self.assertAlmostEqual(mass, 1.0, places=5)
            self.assertEqual(float(mollifier(np.array([0.3]))[0]), 0.0)
            np.testing.assert_allclose(mollifier(s), mollifier(-s))

    def test_from_tag(self):
        self.assertEqual(Mollifier.from_tag('hat(0.1)').radius, 0.1)
        self.assertEqual(Mollifier.from_tag('bump(0.05)').name, 'bump(0.05)')
        with self.assertRaises(UnknownTagError):
            Mollifier.from_tag('gauss(1)')
        with self.assertRaises(InvalidInputError):
            Mollifier.from_tag('bump(0)')

    def test_constant_field_preserved(self):
        rotation = VectorField.rotation(1.0)
        mollified = mollify_field(TimeDependentField.constant(rotation, 1.0),
                                  Mollifier.bump(0.05), 2.0 ** -10)
        self.assertEqual(len(mollified), 1024)
        points = np.array([[0.5, 0.0], [0.2, -0.7]])
        for t in (0.25, 0.5, 0.75):
            np.testing.assert_allclose(mollified.field_at(t)(points),
                                       rotation(points), atol=1e-5)
        # truncated at the ends of the time interval
        self.assertLess(np.max(np.abs(mollified.field_at(0.0)(points))),
                        0.6)

    def test_misaligned_step(self):
        field = trotter_field(VectorField.rotation(1.0),
                              VectorField.translation((1.0, 0.0)), 2)
        with self.assertRaises(InvalidInputError):
            mollify_field(field, Mollifier.bump(0.05), 0.3)


class FieldDistanceTestCase(unittest.TestCase):

    def test_l1_distance(self):
        disk = SourceDomain.disk(1)
        sample = sample_measure(disk, 20000, 0)
        rotation = TimeDependentField.constant(VectorField.rotation(1.0), 1.0)
        doubled = TimeDependentField.constant(
            VectorField.rotation(1.0).scaled(2.0), 1.0)
        self.assertEqual(field_l1_distance(rotation, rotation, sample, 0.25),
                         0.0)
        # int_disk |x| dx = 2 pi / 3
        self.assertAlmostEqual(
            field_l1_distance(rotation, doubled, sample, 0.25),
            2 * math.pi / 3, delta=0.05 * 2 * math.pi / 3)
        with self.assertRaises(InvalidInputError):
            field_l1_distance(rotation, doubled, sample, 0.3)
