# -*- coding: utf-8 -*-

"""
ks_flowlab.maps

Maps from a source domain into a target space, with closed-form
directional-gradient oracles for the built-in scenarios.
"""

import numpy as np

from ks_flowlab.errors import InvalidInputError, UnknownTagError
from ks_flowlab.metric_core import as_points, parse_tag

MAP_TAGS = ("identity", "constant", "affine(a11,a12,a21,a22)", "sector")


class MetricMap(object):
    """
    A map u from d-dimensional points to points of a target space.

    Parameters
    ----------
    evaluate : callable
        (n, d) points -> (n, k) target coordinates
    target : TargetSpace
        target space
    dimension : int
        source dimension
    oracle : callable, optional
        (points, VectorField) -> exact |du(Z)| at the points
    name : str, optional
        label
    """

    def __init__(self, evaluate, target, dimension=2, oracle=None, name=None):
        self._evaluate = evaluate
        self.target = target
        self.dimension = int(dimension)
        self.oracle = oracle
        self.name = name or "map"
        self.matrix = None

    def __repr__(self):
        return "MetricMap({} -> {})".format(self.name, self.target.name)

    def __call__(self, x):
        pts, single = as_points(x, self.dimension)
        values = np.asarray(self._evaluate(pts), dtype=float)
        values = values.reshape(len(pts), self.target.dimension)
        return values[0] if single else values

    @classmethod
    def constant(cls, target, value=None, dimension=2):
        value = target.base_point if value is None else \
            target.coerce(value).reshape(target.dimension)

        def evaluate(pts):
            return np.tile(value, (len(pts), 1))

        def oracle(pts, field):
            return np.zeros(len(pts))

        return cls(evaluate, target, dimension, oracle, "constant")

    @classmethod
    def affine(cls, matrix, target, offset=None):
        """u(x) = A x + b into a normed target"""
        if not target.is_normed:
            raise InvalidInputError("Affine maps need a normed target")
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape[0] != target.dimension:
            raise InvalidInputError(
                "Matrix rows must match the target dimension")
        offset = np.zeros(target.dimension) if offset is None else \
            np.asarray(offset, dtype=float)

        def evaluate(pts):
            return pts.dot(matrix.T) + offset

        def oracle(pts, field):
            return target.norm(field(pts).dot(matrix.T))

        result = cls(evaluate, target, matrix.shape[1], oracle,
                     "affine({})".format(",".join(
                         "{:g}".format(a) for a in matrix.reshape(-1))))
        result.matrix = matrix
        return result

    @classmethod
    def identity(cls, target):
        matrix = np.eye(target.dimension)
        result = cls.affine(matrix, target)
        result.name = "identity"
        return result

    @classmethod
    def sector(cls, target):
        """
        The star-tree valued map on the plane sending x to
        (sector index, distance to the sector boundary), the sectors being
        the E cones of opening 2 pi / E bounded by the rays of angle
        2 pi k / E. Continuous: the sector boundary goes to the root.
        """
        if not target.is_tree:
            raise InvalidInputError("Sector maps need a star-tree target")
        edges = target.edges
        if edges < 3:
            raise InvalidInputError("Sector maps need at least three edges")
        opening = 2 * np.pi / edges

        def geometry(pts):
            angle = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * np.pi)
            index = np.minimum(np.floor(angle / opening), edges - 1)
            offset = angle - index * opening
            near_low = offset <= 0.5 * opening
            # unit normal of the nearer bounding ray, pointing into the sector
            ray = np.where(near_low, index * opening, (index + 1) * opening)
            sign = np.where(near_low, 1.0, -1.0)
            normal = sign[:, None] * np.column_stack([-np.sin(ray),
                                                      np.cos(ray)])
            return index, normal

        def evaluate(pts):
            index, normal = geometry(pts)
            distance = np.maximum(np.sum(pts * normal, axis=1), 0.0)
            return np.column_stack([index, distance])

        def oracle(pts, field):
            _, normal = geometry(pts)
            return np.abs(np.sum(normal * field(pts), axis=1))

        return cls(evaluate, target, 2, oracle, "sector")

    @classmethod
    def from_tag(cls, tag, target):
        name, args = parse_tag(tag)
        if name == "identity" and not args:
            return cls.identity(target)
        if name == "constant" and not args:
            return cls.constant(target)
        if name == "affine" and len(args) == 4:
            try:
                values = [float(a) for a in args]
            except ValueError:
                raise InvalidInputError(
                    "Map tag {!r} has non-numeric arguments".format(tag))
            return cls.affine(np.reshape(values, (2, 2)), target)
        if name == "sector" and not args:
            return cls.sector(target)
        raise UnknownTagError("map", tag, MAP_TAGS)


def sector_singular_distance(points, edges=3):
    """
    Distance from points to the singular set of the sector map: the
    bounding rays and the bisectors where the nearer ray switches.
    """
    pts, _ = as_points(points, 2)
    radius = np.linalg.norm(pts, axis=1)
    angle = np.arctan2(pts[:, 1], pts[:, 0])
    half = np.pi / edges
    rays = half * np.arange(2 * edges)
    gap = np.abs(np.angle(np.exp(1j * (angle[:, None] - rays[None, :]))))
    gap = np.min(gap, axis=1)
    return np.where(gap < 0.5 * np.pi, radius * np.sin(gap), radius)
