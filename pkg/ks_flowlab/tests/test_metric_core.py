import math
import unittest

import numpy as np

from ks_flowlab.errors import InvalidInputError, UnknownTagError
from ks_flowlab.metric_core import SourceDomain, TargetSpace, TreePoint, \
    build_lipschitz_family, dist_to_complement, metric_axiom_violation, \
    parse_tag, sample_measure, target_distance


class TagTestCase(unittest.TestCase):

    def test_parse_tag(self):
        self.assertEqual(parse_tag('translation(0.3, 0)'),
                         ('translation', ['0.3', '0']))
        self.assertEqual(parse_tag('Disk(1)'), ('disk', ['1']))
        self.assertEqual(parse_tag('rotation'), ('rotation', []))
        self.assertEqual(parse_tag('tripod()'), ('tripod', []))

    def test_malformed_tag(self):
        with self.assertRaises(InvalidInputError):
            parse_tag('1disk')
        with self.assertRaises(InvalidInputError):
            parse_tag(None)


class SourceDomainTestCase(unittest.TestCase):

    def test_disk(self):
        disk = SourceDomain.disk(1)
        self.assertTrue(disk.contains((0.5, 0.0)))
        self.assertFalse(disk.contains((1.5, 0.0)))
        self.assertAlmostEqual(disk.dist_to_complement((0.5, 0.0)), 0.5)
        np.testing.assert_allclose(
            disk.dist_to_complement([[0.0, 0.0], [0.0, -0.9]]), [1.0, 0.1])
        self.assertEqual(disk.max_norm, 1.0)

    def test_dist_outside_domain(self):
        with self.assertRaises(InvalidInputError):
            SourceDomain.disk(1).dist_to_complement((2.0, 0.0))

    def test_dist_to_complement_function(self):
        box = SourceDomain.box(0.0, 1.0)
        np.testing.assert_allclose(
            dist_to_complement(box, [[0.2, 0.6], [0.5, 0.5]]), [0.2, 0.5])
        with self.assertRaises(InvalidInputError):
            dist_to_complement(box, (1.5, 0.5))

    def test_halfdisk(self):
        half = SourceDomain.halfdisk(1)
        self.assertTrue(half.contains((0.5, 0.0)))
        self.assertFalse(half.contains((-0.5, 0.0)))
        self.assertAlmostEqual(half.dist_to_complement((0.1, 0.0)), 0.1)
        self.assertAlmostEqual(half.dist_to_complement((0.5, 0.7)),
                               1 - math.hypot(0.5, 0.7))

    def test_box_and_annulus(self):
        box = SourceDomain.from_tag('box(0,1)')
        self.assertAlmostEqual(box.dist_to_complement((0.2, 0.6)), 0.2)
        annulus = SourceDomain.from_tag('annulus(0.5,1)')
        self.assertFalse(annulus.contains((0.1, 0.1)))
        self.assertAlmostEqual(annulus.dist_to_complement((0.6, 0.0)), 0.1)

    def test_plane(self):
        plane = SourceDomain.plane()
        self.assertTrue(plane.contains((100.0, 0.0)))
        self.assertEqual(plane.dist_to_complement((3.0, 4.0)), np.inf)

    def test_unknown_domain(self):
        with self.assertRaises(UnknownTagError):
            SourceDomain.from_tag('sphere(1)')
        with self.assertRaises(ValueError):
            SourceDomain.from_tag('disk(a)')
        with self.assertRaises(InvalidInputError):
            SourceDomain.from_tag('annulus(1,0.5)')

    def test_sample_measure(self):
        disk = SourceDomain.disk(1)
        sample = sample_measure(disk, 100000, 3)
        self.assertAlmostEqual(np.sum(sample.weights), math.pi, delta=0.05)
        self.assertTrue(np.all(sample.weights[~sample.inside] == 0))
        again = sample_measure(disk, 100000, 3)
        np.testing.assert_array_equal(sample.points, again.points)
        with self.assertRaises(InvalidInputError):
            sample_measure(disk, 0, 3)


class TargetSpaceTestCase(unittest.TestCase):

    def test_normed_distances(self):
        a, b = (0.0, 0.0), (1.0, 1.0)
        self.assertAlmostEqual(TargetSpace.normed(2, 'l1').distance(a, b), 2.0)
        self.assertAlmostEqual(TargetSpace.normed(2, 'linf').distance(a, b),
                               1.0)
        self.assertAlmostEqual(TargetSpace.normed(2).distance(a, b),
                               math.sqrt(2))
        self.assertTrue(TargetSpace.normed(2).is_hilbert)
        self.assertFalse(TargetSpace.normed(2, 'l1').is_hilbert)

    def test_tree_distances(self):
        tripod = TargetSpace.tripod()
        self.assertAlmostEqual(
            tripod.distance(TreePoint(0, 1.5), TreePoint(1, 0.5)), 2.0)
        self.assertAlmostEqual(
            tripod.distance(TreePoint(2, 1.5), TreePoint(2, 0.5)), 1.0)
        self.assertAlmostEqual(
            tripod.distance(TreePoint(0, 0.0), TreePoint(1, 0.0)), 0.0)
        self.assertTrue(tripod.is_tree)
        self.assertFalse(tripod.is_hilbert)

    def test_coerce(self):
        tripod = TargetSpace.tripod()
        with self.assertRaises(InvalidInputError):
            tripod.coerce(TreePoint(3, 1.0))
        with self.assertRaises(InvalidInputError):
            tripod.coerce(TreePoint(0, -1.0))
        with self.assertRaises(InvalidInputError):
            TargetSpace.normed(2).coerce(TreePoint(0, 1.0))
        self.assertEqual(TargetSpace.normed(1).coerce(2.0).shape, (1,))

    def test_target_distance_function(self):
        self.assertAlmostEqual(
            target_distance(TargetSpace.normed(2, 'l1'), (0.0, 0.0),
                            (1.0, -2.0)), 3.0)
        tripod = TargetSpace.tripod()
        np.testing.assert_allclose(
            target_distance(tripod, [[0.0, 1.0], [2.0, 2.0]],
                            [[1.0, 0.5], [2.0, 0.5]]), [1.5, 1.5])

    def test_coerce_raw_tree_arrays(self):
        tripod = TargetSpace.tripod()
        np.testing.assert_array_equal(tripod.coerce([2.0, 1.0]), [2.0, 1.0])
        for bad in ([3.0, 1.0], [0.5, 1.0], [-1.0, 1.0], [1.0, -0.5]):
            with self.assertRaises(InvalidInputError):
                tripod.coerce(bad)

    def test_from_tag(self):
        self.assertEqual(TargetSpace.from_tag('normed(3,l1)').name,
                         'normed(3,l1)')
        self.assertEqual(TargetSpace.from_tag('reals').dimension, 1)
        self.assertEqual(TargetSpace.from_tag('star(5)').edges, 5)
        self.assertEqual(TargetSpace.from_tag('normed(2,l3)').order, 3.0)
        with self.assertRaises(UnknownTagError):
            TargetSpace.from_tag('sphere')
        with self.assertRaises(InvalidInputError):
            TargetSpace.from_tag('normed(2,lx)')

    def test_metric_axioms(self):
        for target in (TargetSpace.tripod(), TargetSpace.star_tree(5),
                       TargetSpace.normed(2, 'l1'), TargetSpace.normed(3)):
            self.assertLessEqual(metric_axiom_violation(target, 500, 1),
                                 1e-12)


class LipschitzFamilyTestCase(unittest.TestCase):

    def test_tree_family_recovers_distance(self):
        tripod = TargetSpace.tripod()
        centers = [(0.0, 0.0), (0.0, 2.0), (1.0, 2.0), (2.0, 2.0)]
        family = build_lipschitz_family(tripod, centers, (1.0, 2.0, 4.0))
        self.assertEqual(len(family), 12)
        rng = np.random.default_rng(0)
        a = tripod.random_points(100, rng, 2.0)
        b = tripod.random_points(100, rng, 2.0)
        np.testing.assert_allclose(family.sup_difference(a, b),
                                   tripod.distance(a, b), atol=1e-10)
        self.assertLessEqual(family.max_lipschitz_ratio(a, b), 1 + 1e-12)

    def test_member(self):
        target = TargetSpace.normed(2)
        family = build_lipschitz_family(target, [(0.0, 0.0)], (1.0, 2.0))
        f = family.member(1)
        self.assertAlmostEqual(float(f(np.array([[0.5, 0.0]]))[0]), 1.5)
        with self.assertRaises(InvalidInputError):
            family.member(2)

    def test_invalid_family(self):
        target = TargetSpace.normed(2)
        with self.assertRaises(InvalidInputError):
            build_lipschitz_family(target, [], (1.0,))
        with self.assertRaises(InvalidInputError):
            build_lipschitz_family(target, [(0.0, 0.0)], (0.0,))
