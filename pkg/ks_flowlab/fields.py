# -*- coding: utf-8 -*-

"""
ks_flowlab.fields

Closed-form regular vector fields with certified bounds, piecewise-in-time
fields, the dyadic splitting fields alternating 2Z1 and 2Z2, and the time
mollification used to test weak-in-time convergence.
"""

import logging

import numpy as np

from ks_flowlab.errors import InvalidInputError, UnknownTagError
from ks_flowlab.metric_core import as_points, parse_tag

logger = logging.getLogger(__name__)

BOUND_TOLERANCE = 1e-9
ALIGN_TOLERANCE = 1e-9


def steps_for(length, step):
    """Number of steps of size step in length, or None if not aligned"""
    ratio = length / step
    steps = int(round(ratio))
    if abs(ratio - steps) > ALIGN_TOLERANCE * max(1.0, ratio):
        return None
    return steps


class VectorField(object):
    """
    A regular vector field Z on d-dimensional space.

    Parameters
    ----------
    value : callable
        (n, d) points -> (n, d) vectors
    divergence : callable
        (n, d) points -> (n,) divergence
    sup_norm : float
        bound for |Z| on the domain of interest
    div_neg_bound : float
        bound for the negative part of div Z
    lip_bound : float
        Lipschitz constant estimate
    div_pos_bound : float, optional
        bound for the positive part of div Z; when given, -Z is regular too
        and the field can be flowed backwards
    dimension : int
        ambient dimension
    name : str, optional
        label used in logs and reports
    """

    def __init__(self, value, divergence, sup_norm, div_neg_bound, lip_bound,
                 div_pos_bound=None, dimension=2, name=None):
        self._value = value
        self._divergence = divergence
        self.sup_norm = float(sup_norm)
        self.div_neg_bound = float(div_neg_bound)
        self.lip_bound = float(lip_bound)
        self.div_pos_bound = None if div_pos_bound is None else float(
            div_pos_bound)
        self.dimension = int(dimension)
        self.name = name or "field"

    def __repr__(self):
        return "VectorField({})".format(self.name)

    def __call__(self, x):
        pts, single = as_points(x, self.dimension)
        result = np.asarray(self._value(pts), dtype=float)
        return result[0] if single else result

    def divergence(self, x):
        pts, single = as_points(x, self.dimension)
        result = np.asarray(self._divergence(pts), dtype=float)
        result = np.broadcast_to(result, (len(pts),))
        return float(result[0]) if single else np.array(result)

    @property
    def reversible(self):
        """Whether -Z is regular as well"""
        return self.div_pos_bound is not None

    def scaled(self, alpha):
        """The field alpha Z"""
        return VectorField.combination([(alpha, self)])

    def __neg__(self):
        return self.scaled(-1.0)

    def __rmul__(self, alpha):
        return self.scaled(alpha)

    def __add__(self, other):
        return VectorField.combination([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return VectorField.combination([(1.0, self), (-1.0, other)])

    def verify_bounds(self, x):
        """
        Largest excess of |Z| over sup_norm and of (div Z)^- over
        div_neg_bound on the given points; both are <= 1e-9 for a
        correctly certified field.
        """
        pts, _ = as_points(x, self.dimension)
        speed = np.linalg.norm(self(pts), axis=1)
        negative = np.maximum(-self.divergence(pts), 0.0)
        return (float(np.max(speed) - self.sup_norm),
                float(np.max(negative) - self.div_neg_bound))

    def satisfies_bounds(self, x):
        sup_excess, div_excess = self.verify_bounds(x)
        return sup_excess <= BOUND_TOLERANCE and div_excess <= BOUND_TOLERANCE

    @classmethod
    def combination(cls, terms):
        """
        The linear combination sum_i c_i Z_i with bounds propagated.
        Repeated fields are merged and zero coefficients dropped.

        Parameters
        ----------
        terms : sequence
            (coefficient, VectorField) pairs

        Returns
        -------
        VectorField
            the combined field
        """
        merged = {}
        order = []
        for coef, field in terms:
            key = id(field)
            if key not in merged:
                merged[key] = [0.0, field]
                order.append(key)
            merged[key][0] += float(coef)
        items = [(merged[k][0], merged[k][1]) for k in order
                 if merged[k][0] != 0.0]
        if not terms:
            raise InvalidInputError("Empty linear combination")
        dimension = terms[0][1].dimension
        if not items:
            return cls.zero(dimension)
        if len(items) == 1 and items[0][0] == 1.0:
            return items[0][1]

        sup_norm = sum(abs(c) * f.sup_norm for c, f in items)
        lip_bound = sum(abs(c) * f.lip_bound for c, f in items)
        div_neg = 0.0
        div_pos = 0.0
        for c, f in items:
            if c > 0:
                div_neg += c * f.div_neg_bound
                div_pos = None if div_pos is None or f.div_pos_bound is None \
                    else div_pos + c * f.div_pos_bound
            else:
                if f.div_pos_bound is None:
                    raise InvalidInputError(
                        "{} has no regular negative".format(f.name))
                div_neg += -c * f.div_pos_bound
                div_pos = None if div_pos is None else \
                    div_pos - c * f.div_neg_bound

        def value(pts):
            return sum(c * f._value(pts) for c, f in items)

        def divergence(pts):
            return sum(c * np.asarray(f._divergence(pts), dtype=float)
                       for c, f in items)

        name = " + ".join("{:g}*{}".format(c, f.name) for c, f in items)
        return cls(value, divergence, sup_norm, div_neg, lip_bound,
                   div_pos_bound=div_pos, dimension=dimension, name=name)

    @classmethod
    def zero(cls, dimension=2):
        return cls(lambda pts: np.zeros_like(pts),
                   lambda pts: np.zeros(len(pts)),
                   0.0, 0.0, 0.0, div_pos_bound=0.0, dimension=dimension,
                   name="zero")

    @classmethod
    def rotation(cls, max_norm=1.0):
        """Z(x) = (-x2, x1); |Z| = |x|, divergence free"""
        def value(pts):
            return np.column_stack([-pts[:, 1], pts[:, 0]])

        return cls(value, lambda pts: np.zeros(len(pts)), max_norm, 0.0, 1.0,
                   div_pos_bound=0.0, name="rotation")

    @classmethod
    def translation(cls, vector):
        vector = np.asarray(vector, dtype=float)

        def value(pts):
            return np.broadcast_to(vector, pts.shape).copy()

        return cls(value, lambda pts: np.zeros(len(pts)),
                   float(np.linalg.norm(vector)), 0.0, 0.0, div_pos_bound=0.0,
                   dimension=len(vector),
                   name="translation({})".format(
                       ",".join("{:g}".format(v) for v in vector)))

    @classmethod
    def contraction(cls, max_norm=1.0, dimension=2):
        """Z(x) = -x; div Z = -d"""
        return cls(lambda pts: -pts,
                   lambda pts: np.full(len(pts), -float(dimension)),
                   max_norm, float(dimension), 1.0, div_pos_bound=0.0,
                   dimension=dimension, name="contraction")

    @classmethod
    def shear(cls, rate, max_norm=1.0):
        """Z(x) = (a x2, 0); divergence free"""
        rate = float(rate)

        def value(pts):
            return np.column_stack([rate * pts[:, 1], np.zeros(len(pts))])

        return cls(value, lambda pts: np.zeros(len(pts)),
                   abs(rate) * max_norm, 0.0, abs(rate), div_pos_bound=0.0,
                   name="shear({:g})".format(rate))

    @classmethod
    def from_tag(cls, tag, domain=None):
        """
        Builds a field from rotation, translation(v), contraction, shear(a)
        or zero; sup bounds use the domain's max_norm.
        """
        name, args = parse_tag(tag)
        max_norm = 1.0 if domain is None else domain.max_norm
        try:
            values = [float(arg) for arg in args]
        except ValueError:
            raise InvalidInputError(
                "Field tag {!r} has non-numeric arguments".format(tag))
        if name == "rotation" and not values:
            return cls.rotation(max_norm)
        if name in ("translation", "constant") and len(values) == 2:
            return cls.translation(values)
        if name == "contraction" and not values:
            return cls.contraction(max_norm)
        if name == "shear" and len(values) == 1:
            return cls.shear(values[0], max_norm)
        if name == "zero" and not values:
            return cls.zero()
        raise UnknownTagError("field", tag, FIELD_TAGS)


FIELD_TAGS = ("rotation", "translation(v1,v2)", "contraction", "shear(a)",
              "zero")


class TimeDependentField(object):
    """
    A field constant on consecutive half-open time intervals partitioning
    [0, horizon).

    Parameters
    ----------
    pieces : sequence
        (start, end, VectorField) triples, contiguous and starting at 0
    """

    def __init__(self, pieces):
        if not pieces:
            raise InvalidInputError("A time dependent field needs pieces")
        starts = np.asarray([p[0] for p in pieces], dtype=float)
        ends = np.asarray([p[1] for p in pieces], dtype=float)
        if starts[0] != 0.0 or np.any(ends <= starts) or \
                np.any(np.abs(starts[1:] - ends[:-1]) > ALIGN_TOLERANCE):
            raise InvalidInputError("Pieces must partition [0, horizon)")
        self.starts = starts
        self.ends = ends
        self.fields = [p[2] for p in pieces]
        self.horizon = float(ends[-1])
        self.dimension = self.fields[0].dimension

    def __len__(self):
        return len(self.fields)

    @classmethod
    def constant(cls, field, horizon=1.0):
        return cls([(0.0, float(horizon), field)])

    @classmethod
    def wrap(cls, field, horizon):
        if isinstance(field, TimeDependentField):
            return field
        return cls.constant(field, horizon)

    @property
    def switching_times(self):
        return self.starts[1:]

    @property
    def sup_norm(self):
        return max(f.sup_norm for f in self.fields)

    @property
    def div_neg_integral(self):
        """Integral over time of the bound for (div Z_t)^-"""
        return float(sum((e - s) * f.div_neg_bound for s, e, f in
                         zip(self.starts, self.ends, self.fields)))

    def piece_index(self, t):
        index = int(np.searchsorted(self.starts,
                                    t + ALIGN_TOLERANCE * self.horizon,
                                    side="right")) - 1
        return min(max(index, 0), len(self.fields) - 1)

    def field_at(self, t):
        return self.fields[self.piece_index(t)]

    def aligned_with(self, step):
        """Whether step divides every switching time and the horizon"""
        times = list(self.switching_times) + [self.horizon]
        return all(steps_for(t, step) is not None for t in times)


def trotter_field(field_1, field_2, level):
    """
    The splitting field equal to 2 Z1 on [j/2^n, (j+1)/2^n) for even j and
    to 2 Z2 for odd j, over [0, 1).

    Parameters
    ----------
    field_1, field_2 : VectorField
        the fields to split
    level : int
        dyadic level n >= 1

    Returns
    -------
    TimeDependentField
        2^n pieces of length 2^-n
    """
    if int(level) < 1:
        raise InvalidInputError("Dyadic level must be >= 1")
    level = int(level)
    doubled = (field_1.scaled(2.0), field_2.scaled(2.0))
    count = 2 ** level
    pieces = [(j / count, (j + 1) / count, doubled[j % 2])
              for j in range(count)]
    return TimeDependentField(pieces)


class Mollifier(object):
    """
    An even kernel with support [-radius, radius] and unit mass.

    Parameters
    ----------
    kernel : callable
        vectorised unnormalised kernel on [-1, 1] (argument s / radius)
    radius : float
        support radius
    name : str
        label
    """

    NORMALISATION_NODES = 200000

    def __init__(self, kernel, radius, name="mollifier"):
        self.radius = float(radius)
        if self.radius <= 0:
            raise InvalidInputError("Mollifier radius must be positive")
        self._kernel = kernel
        self.name = name
        width = 2.0 / self.NORMALISATION_NODES
        nodes = -1.0 + width * (np.arange(self.NORMALISATION_NODES) + 0.5)
        self._mass = float(np.sum(kernel(nodes)) * width * self.radius)

    def __call__(self, s):
        u = np.asarray(s, dtype=float) / self.radius
        inside = np.abs(u) < 1.0
        values = np.zeros_like(u)
        values[inside] = self._kernel(u[inside])
        return values / self._mass

    @classmethod
    def bump(cls, radius):
        def kernel(u):
            return np.exp(-1.0 / (1.0 - u ** 2))
        return cls(kernel, radius, "bump({:g})".format(radius))

    @classmethod
    def hat(cls, radius):
        def kernel(u):
            return 1.0 - np.abs(u)
        return cls(kernel, radius, "hat({:g})".format(radius))

    @classmethod
    def from_tag(cls, tag):
        name, args = parse_tag(tag)
        if name in ("bump", "hat") and len(args) == 1:
            try:
                radius = float(args[0])
            except ValueError:
                raise InvalidInputError(
                    "Mollifier tag {!r} has a non-numeric radius".format(tag))
            return getattr(cls, name)(radius)
        raise UnknownTagError("mollifier", tag, MOLLIFIER_TAGS)


MOLLIFIER_TAGS = ("bump(r)", "hat(r)")


def mollify_field(field, mollifier, step):
    """
    Time mollification Z^phi_t = int phi(t - s) Z_s ds with Z_s = 0 outside
    [0, horizon], sampled at t_k = k step and held on [t_k, t_k + step).

    Parameters
    ----------
    field : TimeDependentField
        field to mollify
    mollifier : Mollifier
        kernel
    step : float
        quadrature step, dividing every switching time and the horizon

    Returns
    -------
    TimeDependentField
        the mollified field on the step grid
    """
    if not field.aligned_with(step):
        raise InvalidInputError(
            "Quadrature step {!r} does not divide the switching times".format(
                step))
    count = steps_for(field.horizon, step)
    nodes = step * (np.arange(count) + 0.5)
    times = step * np.arange(count)
    owner = np.asarray([field.piece_index(s) for s in nodes])
    onehot = np.zeros((count, len(field)))
    onehot[np.arange(count), owner] = 1.0
    weights = mollifier(times[:, None] - nodes[None, :]) * step
    coefficients = weights.dot(onehot)
    pieces = []
    for k, t in enumerate(times):
        terms = [(coefficients[k, j], field.fields[j])
                 for j in np.nonzero(coefficients[k])[0]]
        combined = VectorField.combination(terms) if terms else \
            VectorField.zero(field.dimension)
        pieces.append((t, t + step, combined))
    logger.debug("Mollified %d pieces with %s on %d nodes", len(field),
                 mollifier.name, count)
    return TimeDependentField(pieces)


def field_l1_distance(field_a, field_b, sample, step):
    """
    Space-time L1 distance sum_k step sum_i w_i |Za_{t_k}(x_i) - Zb_{t_k}(x_i)|
    over t_k = k step in [0, horizon).
    """
    horizon = min(field_a.horizon, field_b.horizon)
    count = steps_for(horizon, step)
    if count is None:
        raise InvalidInputError("Step does not divide the horizon")
    points = sample.points[sample.weights > 0]
    weights = sample.weights[sample.weights > 0]
    total = 0.0
    for k in range(count):
        t = k * step
        gap = np.linalg.norm(field_a.field_at(t)(points)
                             - field_b.field_at(t)(points), axis=1)
        total += step * float(np.dot(weights, gap))
    return total
