# -*- coding: utf-8 -*-

"""
ks_flowlab.metric_core

Source domains (bounded Euclidean regions carrying a weighted reference
measure), pointed target spaces (finite dimensional normed spaces and star
trees) and the countable family of 1-Lipschitz test functions that recovers
the target distance as a supremum.
"""

import logging
import re
from collections import namedtuple

import numpy as np

from ks_flowlab.errors import InvalidInputError, UnknownTagError

logger = logging.getLogger(__name__)

TAG_REGEX = r"^\s*([a-z][a-z0-9_\-]*)\s*(?:\((.*)\))?\s*$"

TreePoint = namedtuple("TreePoint", ["edge", "coord"])

MeasureSample = namedtuple("MeasureSample", ["points", "weights", "inside"])


def parse_tag(tag):
    """
    Splits a constructor tag such as ``disk(1)`` or ``translation(0.3,0)``.

    Parameters
    ----------
    tag : str
        constructor tag

    Returns
    -------
    tuple
        the lower-cased name and the list of (stripped) argument strings
    """
    if not isinstance(tag, str):
        raise InvalidInputError("Tag must be a string, got {!r}".format(tag))
    result = re.match(TAG_REGEX, tag.lower())
    if not result:
        raise InvalidInputError("Malformed tag {!r}".format(tag))
    name, args = result.group(1), result.group(2)
    if args is None or not args.strip():
        return name, []
    return name, [arg.strip() for arg in args.split(",")]


def _float_args(kind, tag, args, count):
    if len(args) not in count:
        raise InvalidInputError(
            "{} tag {!r} expects {} argument(s)".format(
                kind, tag, " or ".join(str(c) for c in count)))
    try:
        return [float(arg) for arg in args]
    except ValueError:
        raise InvalidInputError(
            "{} tag {!r} has non-numeric arguments".format(kind, tag))


def as_points(x, dimension):
    """Returns x as a (n, dimension) array and whether a single point was given"""
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.ndim != 2 or arr.shape[1] != dimension:
        raise InvalidInputError(
            "Expected points of dimension {}, got shape {}".format(
                dimension, np.shape(x)))
    return arr, single


class SourceDomain(object):
    """
    A bounded open region of d-dimensional space with a weighted reference
    measure m = w dx and the Euclidean distance.

    Parameters
    ----------
    dimension : int
        ambient dimension d
    contains : callable
        vectorised membership predicate, (n, d) array -> (n,) bool array
    low, high : array_like
        corners of an axis-aligned box containing the region
    density : callable, optional
        vectorised density w of m with respect to Lebesgue measure,
        defaults to w = 1
    boundary_distance : callable, optional
        closed form for d(x, complement), (n, d) -> (n,)
    boundary_sampler : callable, optional
        resolution -> (m, d) array of points on the boundary, used when no
        closed form is available
    boundary_resolution : float, optional
        spacing handed to boundary_sampler
    whole_space : bool
        the region is the whole ambient space (the box only bounds sampling)
    max_norm : float, optional
        bound for |x| over the region, defaults to the box bound
    name : str, optional
        tag the domain was built from
    """

    def __init__(self, dimension, contains, low, high, density=None,
                 boundary_distance=None, boundary_sampler=None,
                 boundary_resolution=None, whole_space=False, max_norm=None,
                 name=None):
        self.dimension = int(dimension)
        if self.dimension < 1:
            raise InvalidInputError("Dimension must be positive")
        self.low = np.asarray(low, dtype=float).reshape(self.dimension)
        self.high = np.asarray(high, dtype=float).reshape(self.dimension)
        if np.any(self.high <= self.low):
            raise InvalidInputError("Degenerate bounding box")
        self._contains = contains
        self._density = density
        self._boundary_distance = boundary_distance
        self._boundary_sampler = boundary_sampler
        self.boundary_resolution = boundary_resolution
        self.whole_space = bool(whole_space)
        if max_norm is None:
            max_norm = float(np.max(np.maximum(np.abs(self.low),
                                               np.abs(self.high))
                                    * np.sqrt(self.dimension)))
        self.max_norm = float(max_norm)
        self.name = name or "domain"

    def __repr__(self):
        return "SourceDomain({})".format(self.name)

    @property
    def box_volume(self):
        return float(np.prod(self.high - self.low))

    @property
    def diameter(self):
        return float(np.linalg.norm(self.high - self.low))

    def in_box(self, x):
        pts, single = as_points(x, self.dimension)
        result = np.all((pts >= self.low) & (pts <= self.high), axis=1)
        return result[0] if single else result

    def contains(self, x):
        pts, single = as_points(x, self.dimension)
        result = np.asarray(self._contains(pts), dtype=bool)
        if not self.whole_space:
            result &= np.all((pts >= self.low) & (pts <= self.high), axis=1)
        return bool(result[0]) if single else result

    def density(self, x):
        pts, single = as_points(x, self.dimension)
        if self._density is None:
            result = np.ones(len(pts))
        else:
            result = np.asarray(self._density(pts), dtype=float)
        return float(result[0]) if single else result

    def dist_to_complement(self, x):
        """
        Distance from points of the region to its complement.

        Parameters
        ----------
        x : array_like
            a point or an (n, d) array of points of the region

        Returns
        -------
        float or numpy.ndarray
            d(x, complement); infinite for the whole space
        """
        pts, single = as_points(x, self.dimension)
        inside = self.contains(pts)
        if not np.all(inside):
            raise InvalidInputError(
                "{} point(s) outside {}, first {}".format(
                    int(np.sum(~inside)), self.name,
                    pts[np.argmin(inside)].tolist()))
        if self.whole_space:
            result = np.full(len(pts), np.inf)
        elif self._boundary_distance is not None:
            result = np.asarray(self._boundary_distance(pts), dtype=float)
        elif self._boundary_sampler is not None:
            result = self._sampled_boundary_distance(pts)
        else:
            raise InvalidInputError(
                "Domain {} has no boundary description".format(self.name))
        return float(result[0]) if single else result

    def _sampled_boundary_distance(self, pts):
        # overestimates by at most half the sampling resolution
        resolution = self.boundary_resolution or 1e-3 * self.diameter
        boundary = np.asarray(self._boundary_sampler(resolution), dtype=float)
        result = np.empty(len(pts))
        for start in range(0, len(pts), 1024):
            chunk = pts[start:start + 1024]
            diff = chunk[:, None, :] - boundary[None, :, :]
            result[start:start + 1024] = np.min(
                np.linalg.norm(diff, axis=2), axis=1)
        return result

    @classmethod
    def disk(cls, radius=1.0, center=(0.0, 0.0)):
        radius = float(radius)
        if radius <= 0:
            raise InvalidInputError("Disk radius must be positive")
        center = np.asarray(center, dtype=float)

        def contains(pts):
            return np.linalg.norm(pts - center, axis=1) < radius

        def boundary_distance(pts):
            return radius - np.linalg.norm(pts - center, axis=1)

        return cls(2, contains, center - radius, center + radius,
                   boundary_distance=boundary_distance,
                   max_norm=radius + float(np.linalg.norm(center)),
                   name="disk({:g})".format(radius))

    @classmethod
    def halfdisk(cls, radius=1.0):
        """The half disk {|x| < r, x_1 > 0}"""
        radius = float(radius)
        if radius <= 0:
            raise InvalidInputError("Half disk radius must be positive")

        def contains(pts):
            return (np.linalg.norm(pts, axis=1) < radius) & (pts[:, 0] > 0)

        def boundary_distance(pts):
            return np.minimum(radius - np.linalg.norm(pts, axis=1), pts[:, 0])

        return cls(2, contains, (0.0, -radius), (radius, radius),
                   boundary_distance=boundary_distance, max_norm=radius,
                   name="halfdisk({:g})".format(radius))

    @classmethod
    def box(cls, low=0.0, high=1.0, dimension=2):
        low, high = float(low), float(high)
        if high <= low:
            raise InvalidInputError("Box needs low < high")

        def contains(pts):
            return np.all((pts > low) & (pts < high), axis=1)

        def boundary_distance(pts):
            return np.min(np.minimum(pts - low, high - pts), axis=1)

        return cls(dimension, contains, [low] * dimension, [high] * dimension,
                   boundary_distance=boundary_distance,
                   name="box({:g},{:g})".format(low, high))

    @classmethod
    def annulus(cls, inner=0.5, outer=1.0):
        inner, outer = float(inner), float(outer)
        if not 0 < inner < outer:
            raise InvalidInputError("Annulus needs 0 < inner < outer")

        def contains(pts):
            r = np.linalg.norm(pts, axis=1)
            return (r > inner) & (r < outer)

        def boundary_distance(pts):
            r = np.linalg.norm(pts, axis=1)
            return np.minimum(r - inner, outer - r)

        return cls(2, contains, (-outer, -outer), (outer, outer),
                   boundary_distance=boundary_distance, max_norm=outer,
                   name="annulus({:g},{:g})".format(inner, outer))

    @classmethod
    def plane(cls, half_width=1.0):
        """The whole plane; the box [-L, L]^2 only bounds sampling"""
        half_width = float(half_width)

        def contains(pts):
            return np.ones(len(pts), dtype=bool)

        return cls(2, contains, (-half_width, -half_width),
                   (half_width, half_width), whole_space=True,
                   name="plane({:g})".format(half_width))

    @classmethod
    def from_tag(cls, tag):
        """Builds a domain from tags like disk(r), box(a,b), annulus(r1,r2)"""
        name, args = parse_tag(tag)
        if name == "disk":
            values = _float_args("Domain", tag, args, (0, 1))
            return cls.disk(*values)
        if name == "halfdisk":
            values = _float_args("Domain", tag, args, (0, 1))
            return cls.halfdisk(*values)
        if name == "box":
            values = _float_args("Domain", tag, args, (0, 2))
            return cls.box(*values)
        if name == "annulus":
            values = _float_args("Domain", tag, args, (0, 2))
            return cls.annulus(*values)
        if name == "plane":
            values = _float_args("Domain", tag, args, (0, 1))
            return cls.plane(*values)
        raise UnknownTagError("domain", tag, DOMAIN_TAGS)


DOMAIN_TAGS = ("disk(r)", "halfdisk(r)", "box(a,b)", "annulus(r1,r2)",
               "plane(L)")


class TargetSpace(object):
    """
    A pointed complete metric space: either R^k with an l^q norm (base point
    the origin) or a star tree of half-lines glued at a root (base point the
    root). Tree points are stored as (edge, coordinate) pairs.
    """

    NORMED = "normed"
    STAR_TREE = "star_tree"

    def __init__(self, kind, dimension=None, order=2.0, edges=None):
        if kind == self.NORMED:
            if dimension is None or int(dimension) < 1:
                raise InvalidInputError("Normed target needs dimension >= 1")
            order = float(order)
            if order < 1:
                raise InvalidInputError("Norm order must be >= 1")
            self.dimension = int(dimension)
            self.order = order
            self.edges = None
        elif kind == self.STAR_TREE:
            if edges is None or int(edges) < 1:
                raise InvalidInputError("Star tree needs at least one edge")
            self.dimension = 2
            self.order = None
            self.edges = int(edges)
        else:
            raise InvalidInputError("Unknown target kind {!r}".format(kind))
        self.kind = kind

    def __repr__(self):
        return "TargetSpace({})".format(self.name)

    @property
    def name(self):
        if self.is_tree:
            return "star_tree({})".format(self.edges)
        return "normed({},{})".format(self.dimension, self.norm_tag)

    @property
    def norm_tag(self):
        if self.order is None:
            return None
        if np.isinf(self.order):
            return "linf"
        return "l{:g}".format(self.order)

    @property
    def is_normed(self):
        return self.kind == self.NORMED

    @property
    def is_tree(self):
        return self.kind == self.STAR_TREE

    @property
    def is_hilbert(self):
        return self.is_normed and self.order == 2.0

    @property
    def base_point(self):
        if self.is_tree:
            return np.zeros(2)
        return np.zeros(self.dimension)

    @classmethod
    def normed(cls, dimension, norm="l2"):
        return cls(cls.NORMED, dimension=dimension, order=cls._norm_order(norm))

    @classmethod
    def star_tree(cls, edges):
        return cls(cls.STAR_TREE, edges=edges)

    @classmethod
    def tripod(cls):
        return cls.star_tree(3)

    @staticmethod
    def _norm_order(norm):
        if isinstance(norm, (int, float)):
            return float(norm)
        norm = norm.strip().lower()
        if norm in ("l2", "euclidean"):
            return 2.0
        if norm == "l1":
            return 1.0
        if norm == "linf":
            return np.inf
        result = re.match(r"^lp?\(?([0-9]*\.?[0-9]+)\)?$", norm)
        if result:
            return float(result.group(1))
        raise InvalidInputError("Unknown norm tag {!r}".format(norm))

    @classmethod
    def from_tag(cls, tag):
        """Builds a target from normed(k,l2|l1|linf|lq), tripod or star(E)"""
        name, args = parse_tag(tag)
        if name == "normed":
            if len(args) not in (1, 2):
                raise InvalidInputError(
                    "Target tag {!r} expects (k[,norm])".format(tag))
            try:
                dimension = int(args[0])
            except ValueError:
                raise InvalidInputError(
                    "Target tag {!r} has a non-integer dimension".format(tag))
            return cls.normed(dimension, args[1] if len(args) == 2 else "l2")
        if name == "reals":
            return cls.normed(1)
        if name == "tripod":
            return cls.tripod()
        if name == "star":
            values = _float_args("Target", tag, args, (1,))
            return cls.star_tree(int(values[0]))
        raise UnknownTagError("target", tag, TARGET_TAGS)

    def coerce(self, points):
        """
        Validates points of this space and returns them as an array whose
        last axis holds the coordinates ((edge, coord) pairs for trees).
        """
        if self.is_normed:
            if isinstance(points, TreePoint) or (
                    isinstance(points, (list, tuple)) and points
                    and isinstance(points[0], TreePoint)):
                raise InvalidInputError(
                    "Tree point given to normed target {}".format(self.name))
            arr = np.asarray(points, dtype=float)
            if self.dimension == 1 and (arr.ndim == 0 or arr.shape[-1] != 1):
                arr = arr[..., None]
            if arr.ndim == 0 or arr.shape[-1] != self.dimension:
                raise InvalidInputError(
                    "Point of shape {} does not belong to {}".format(
                        np.shape(points), self.name))
            return arr
        arr = np.asarray(points, dtype=float)
        if arr.ndim == 0 or arr.shape[-1] != 2:
            raise InvalidInputError(
                "Point of shape {} does not belong to {}".format(
                    np.shape(points), self.name))
        edge, coord = arr[..., 0], arr[..., 1]
        if np.any(edge != np.round(edge)) or np.any(edge < 0) or \
                np.any(edge >= self.edges):
            raise InvalidInputError(
                "Edge index outside [0, {}) in {}".format(self.edges,
                                                          self.name))
        if np.any(coord < 0) or not np.all(np.isfinite(coord)):
            raise InvalidInputError("Tree coordinates must be >= 0")
        return arr

    def norm(self, vectors):
        """Norm of tangent vectors of a normed target"""
        if not self.is_normed:
            raise InvalidInputError("{} has no norm".format(self.name))
        return np.linalg.norm(np.asarray(vectors, dtype=float),
                              ord=self.order, axis=-1)

    def distance(self, a, b):
        """
        Distance between points, broadcast over leading axes.

        Parameters
        ----------
        a, b : array_like or TreePoint
            points of this space

        Returns
        -------
        float or numpy.ndarray
            d_Y(a, b)
        """
        a = self.coerce(a)
        b = self.coerce(b)
        if self.is_normed:
            result = np.linalg.norm(a - b, ord=self.order, axis=-1)
        else:
            same_edge = a[..., 0] == b[..., 0]
            result = np.where(same_edge, np.abs(a[..., 1] - b[..., 1]),
                              a[..., 1] + b[..., 1])
        if np.ndim(result) == 0:
            return float(result)
        return result

    def random_points(self, n, rng, scale=1.0):
        """Draws n points within distance scale of the base point"""
        if self.is_normed:
            return rng.uniform(-scale, scale, size=(n, self.dimension))
        edges = rng.integers(0, self.edges, size=n).astype(float)
        coords = rng.uniform(0.0, scale, size=n)
        return np.column_stack([edges, coords])


TARGET_TAGS = ("normed(k,l2|l1|linf|lq)", "reals", "tripod", "star(E)")


def target_distance(target, a, b):
    """d_Y(a, b) on the target space"""
    return target.distance(a, b)


def metric_axiom_violation(target, n=1000, seed=0, scale=2.0):
    """
    Worst violation of symmetry and of the triangle inequality on n random
    triples of target points.
    """
    rng = np.random.default_rng(seed)
    a = target.random_points(n, rng, scale)
    b = target.random_points(n, rng, scale)
    c = target.random_points(n, rng, scale)
    d_ab = target_distance(target, a, b)
    triangle = d_ab - target_distance(target, a, c) \
        - target_distance(target, c, b)
    symmetry = np.abs(d_ab - target_distance(target, b, a))
    return float(max(np.max(triangle), np.max(symmetry)))


class LipschitzFamily(object):
    """
    The finite family f_{k,n}(y) = (k - d_Y(y, c_n)) v 0 of 1-Lipschitz
    functions with bounded support built on centers c_n and levels k.
    Members are ordered center-major.
    """

    def __init__(self, target, centers, levels):
        self.target = target
        self.centers = target.coerce(centers).reshape(-1, target.dimension)
        self.levels = np.asarray(levels, dtype=float).reshape(-1)

    def __len__(self):
        return len(self.centers) * len(self.levels)

    def evaluate(self, points):
        """Values of every member at every point, shape (members, n)"""
        pts = self.target.coerce(points).reshape(-1, self.target.dimension)
        dist = self.target.distance(self.centers[:, None, :], pts[None, :, :])
        dist = np.atleast_2d(dist)
        values = np.maximum(self.levels[None, :, None] - dist[:, None, :], 0.0)
        return values.reshape(len(self), len(pts))

    def member(self, index):
        """The index-th member as a vectorised callable"""
        if not 0 <= index < len(self):
            raise InvalidInputError("No family member {}".format(index))
        center = self.centers[index // len(self.levels)]
        level = self.levels[index % len(self.levels)]
        target = self.target

        def f(points):
            return np.maximum(level - target.distance(points, center), 0.0)
        return f

    def sup_difference(self, a, b):
        """sup over members of f(a) - f(b), never above d_Y(a, b)"""
        values_a = self.evaluate(a)
        values_b = self.evaluate(b)
        result = np.max(values_a - values_b, axis=0)
        return float(result[0]) if result.size == 1 else result

    def max_lipschitz_ratio(self, a, b):
        """Largest |f(a) - f(b)| / d_Y(a, b) over members and pairs"""
        dist = np.atleast_1d(self.target.distance(a, b))
        gap = np.abs(self.evaluate(a) - self.evaluate(b))
        keep = dist > 0
        if not np.any(keep):
            return 0.0
        return float(np.max(gap[:, keep] / dist[keep]))


def build_lipschitz_family(target, centers, levels):
    """
    Builds the 1-Lipschitz family on the given centers and levels.

    Parameters
    ----------
    target : TargetSpace
        the space the functions live on
    centers : sequence
        nonempty list of target points
    levels : sequence of float
        positive truncation levels

    Returns
    -------
    LipschitzFamily
        family of size len(centers) * len(levels)
    """
    if centers is None or len(centers) == 0:
        raise InvalidInputError("Lipschitz family needs at least one center")
    levels = np.asarray(levels, dtype=float).reshape(-1)
    if levels.size == 0 or np.any(levels <= 0):
        raise InvalidInputError("Lipschitz family levels must be positive")
    family = LipschitzFamily(target, centers, levels)
    logger.debug("Built Lipschitz family of %d members on %s",
                 len(family), target.name)
    return family


def dist_to_complement(domain, x):
    """d(x, complement of the domain); raises for points outside it"""
    return domain.dist_to_complement(x)


def sample_measure(domain, n, seed):
    """
    Monte Carlo quadrature nodes for integrals against m over the domain.

    Points are uniform in the bounding box; points outside the domain keep
    zero weight, the others w(x) vol(box) / n.

    Parameters
    ----------
    domain : SourceDomain
        region and reference measure
    n : int
        number of nodes
    seed : int
        seed of the numpy generator

    Returns
    -------
    MeasureSample
        points (n, d), weights (n,) and the inside mask
    """
    if int(n) < 1:
        raise InvalidInputError("Sample size must be at least 1")
    n = int(n)
    rng = np.random.default_rng(seed)
    points = domain.low + rng.random((n, domain.dimension)) * (
        domain.high - domain.low)
    inside = domain.contains(points)
    weights = np.where(inside, domain.density(points), 0.0) * (
        domain.box_volume / n)
    return MeasureSample(points, weights, inside)
