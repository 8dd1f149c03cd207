# -*- coding: utf-8 -*-

"""
ks_flowlab.ks_energy

Directional Korevaar-Schoen energies of maps into metric targets along the
flow of a vector field: the energy densities e^Z_{p,eps}, their integrals
against cutoffs, the density |du(Z)| read off at small eps, and the
verifiers of its calculus rules (scaling, triangle inequality, parallelogram
identity, link with the slope of u, regularity along the flow).
"""

import csv
import logging
import math
from collections import namedtuple

import numpy as np

from ks_flowlab.errors import InvalidInputError, UnsupportedTargetError
from ks_flowlab.flows import advance
from ks_flowlab.metric_core import as_points, dist_to_complement

logger = logging.getLogger(__name__)

DEFAULT_H = 1e-3
MIN_FLOW_STEPS = 16
SCHEMA_VERSION = 1

EnergyDensity = namedtuple("EnergyDensity", ["values", "masked"])
LinkEstimate = namedtuple("LinkEstimate",
                          ["upper_gradient", "directional", "slack"])
ParallelogramResidual = namedtuple("ParallelogramResidual",
                                   ["residual", "rhs", "valid", "l1"])


def flow_for_energy(field, points, eps):
    """Fl^Z_eps with integrator step min(1e-3, eps / 16)"""
    return advance(field, points, eps, h=min(DEFAULT_H, abs(eps) / 16.0),
                   min_steps=MIN_FLOW_STEPS)


def escape_time(x, field, domain):
    """
    Time before which the flow from x cannot leave the domain:
    d(x, complement) / sup|Z|, infinite for the whole space or Z = 0.

    Parameters
    ----------
    x : array_like
        a point or (n, d) points of the domain
    field : VectorField
        the field
    domain : SourceDomain
        the region

    Returns
    -------
    float or numpy.ndarray
        the escape times
    """
    distance = dist_to_complement(domain, x)
    if field.sup_norm == 0:
        return np.inf if np.ndim(distance) == 0 else \
            np.full(np.shape(distance), np.inf)
    return distance / field.sup_norm


def escape_time_of_set(points, field, domain):
    """T_C: the infimum of escape times over the points of C"""
    return float(np.min(np.atleast_1d(escape_time(points, field, domain))))


def energy_density(u, field, domain, p, eps, points):
    """
    e^Z_{p,eps}[u](x) = d_Y(u(x), u(Fl_eps(x)))^p / eps^p when both x and
    Fl_eps(x) lie in the domain, 0 otherwise.

    Returns
    -------
    EnergyDensity
        values and the mask of points set to zero
    """
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    pts, _ = as_points(points, domain.dimension)
    moved = flow_for_energy(field, pts, eps)
    masked = ~(domain.contains(pts) & domain.contains(moved))
    gaps = u.target.distance(u(pts), u(moved))
    values = np.where(masked, 0.0, (gaps / eps) ** p)
    if np.any(masked):
        logger.debug("eps=%g: %d of %d points masked", eps,
                     int(np.sum(masked)), len(pts))
    return EnergyDensity(values, masked)


class Cutoff(object):
    """
    A continuous cutoff 0 <= phi <= 1 vanishing within margin of the
    domain's complement.
    """

    def __init__(self, func, margin):
        self._func = func
        self.margin = float(margin)
        if self.margin <= 0:
            raise InvalidInputError("Cutoff margin must be positive")

    def __call__(self, points):
        return np.asarray(self._func(points), dtype=float)

    def check(self, domain, points):
        """Whether phi is in [0, 1] and vanishes near the complement"""
        pts, _ = as_points(points, domain.dimension)
        values = self(pts)
        if np.any(values < 0) or np.any(values > 1):
            return False
        inside = domain.contains(pts)
        near = np.zeros(len(pts), dtype=bool)
        near[inside] = domain.dist_to_complement(pts[inside]) < self.margin
        near |= ~inside
        return bool(np.all(values[near] == 0))

    @classmethod
    def radial(cls, inner, outer, margin, center=(0.0, 0.0)):
        """1 on |x - c| <= inner, linear down to 0 at outer"""
        center = np.asarray(center, dtype=float)

        def func(pts):
            r = np.linalg.norm(pts - center, axis=1)
            return np.clip((outer - r) / (outer - inner), 0.0, 1.0)

        return cls(func, margin)

    @classmethod
    def tent(cls, center, radius, margin):
        """max(0, 1 - |x - c| / r), a cutoff with small support"""
        center = np.asarray(center, dtype=float)

        def func(pts):
            return np.maximum(
                0.0, 1.0 - np.linalg.norm(pts - center, axis=1) / radius)

        return cls(func, margin)


def energy_functional(u, field, domain, p, eps, cutoff, sample):
    """E^Z_{p,eps}[u](phi) = int phi e^Z_{p,eps}[u] dm by quadrature"""
    density = energy_density(u, field, domain, p, eps, sample.points)
    return float(np.sum(sample.weights * cutoff(sample.points)
                        * density.values))


class EnergyReport(object):
    """
    Energy densities along a decreasing eps list on quadrature nodes, with
    the density H = (e_{eps_min})^{1/p} and the energy int H^p dm.
    """

    def __init__(self, p, eps, points, weights, roots, masked):
        self.p = float(p)
        self.eps = np.asarray(eps, dtype=float)
        self.points = points
        self.weights = weights
        self.roots = roots
        self.masked = masked

    @property
    def H(self):
        return self.roots[-1]

    @property
    def masked_final(self):
        return self.masked[-1]

    @property
    def energies(self):
        """E^Z_{p,eps}(1) for each eps"""
        return self.roots ** self.p @ self.weights

    @property
    def energy(self):
        return float(np.dot(self.weights, self.H ** self.p))

    @property
    def lp_gaps(self):
        """L^p distances between consecutive (e_eps)^{1/p} fields"""
        diffs = np.abs(np.diff(self.roots, axis=0)) ** self.p
        return (diffs @ self.weights) ** (1.0 / self.p)

    def to_json(self, max_points=None):
        count = len(self.points) if max_points is None else \
            min(int(max_points), len(self.points))
        return {
            "schema": SCHEMA_VERSION,
            "p": self.p,
            "eps": [float(e) for e in self.eps],
            "E_per_eps": [float(e) for e in self.energies],
            "E": self.energy,
            "lp_gaps": [float(g) for g in self.lp_gaps],
            "points": [{"x": [float(v) for v in self.points[i]],
                        "H": float(self.H[i]),
                        "masked": bool(self.masked_final[i])}
                       for i in range(count)],
        }

    def to_csv(self, path):
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["eps", "E"])
            for eps, value in zip(self.eps, self.energies):
                writer.writerow([repr(float(eps)), repr(float(value))])


def _check_eps_list(eps_list):
    eps = np.asarray(eps_list, dtype=float).reshape(-1)
    if eps.size == 0 or np.any(eps <= 0):
        raise InvalidInputError("eps list must hold positive values")
    if np.any(np.diff(eps) >= 0):
        raise InvalidInputError("eps list must be strictly decreasing")
    return eps


def directional_gradient(u, field, domain, p, eps_list, sample):
    """
    Densities (e^Z_{p,eps})^{1/p} for each eps on the nodes of sample;
    |du(Z)| is the field at the smallest eps.

    Parameters
    ----------
    u : MetricMap
        the map
    field : VectorField
        direction
    domain : SourceDomain
        region
    p : float
        exponent in (1, inf)
    eps_list : sequence of float
        strictly decreasing positive values
    sample : MeasureSample
        quadrature nodes; zero-weight nodes are dropped

    Returns
    -------
    EnergyReport
        the full eps profile and H
    """
    if p <= 1:
        raise InvalidInputError("Exponent p must exceed 1")
    eps = _check_eps_list(eps_list)
    keep = sample.weights > 0
    points = sample.points[keep]
    weights = sample.weights[keep]
    roots = []
    masked = []
    for e in eps:
        density = energy_density(u, field, domain, p, e, points)
        roots.append(density.values ** (1.0 / p))
        masked.append(density.masked)
    report = EnergyReport(p, eps, points, weights, np.asarray(roots),
                          np.asarray(masked))
    logger.info("Directional energy of %s along %s: E=%.6g (eps_min=%g)",
                u.name, field.name, report.energy, eps[-1])
    return report


class DirectionalDerivative(object):
    """Vectors d/dt u(Fl_t(x)) at t = 0 for a normed target"""

    def __init__(self, points, vectors, tau, central, target):
        self.points = points
        self.vectors = vectors
        self.tau = float(tau)
        self.central = bool(central)
        self.target = target

    def norms(self):
        return self.target.norm(self.vectors)


def _default_tau(domain):
    return 1e-4 * (1.0 if domain is None else domain.diameter)


def directional_derivative(u, field, points, tau=None, domain=None):
    """
    Central difference (u(Fl_tau x) - u(Fl_-tau x)) / (2 tau); falls back to
    a forward difference when -Z is not regular.
    """
    if not u.target.is_normed:
        raise UnsupportedTargetError(
            "Directional derivatives need a normed target, got {}".format(
                u.target.name))
    tau = _default_tau(domain) if tau is None else float(tau)
    pts, _ = as_points(points, u.dimension)
    forward = u(advance(field, pts, tau, h=tau))
    if field.reversible:
        backward = u(advance(field, pts, -tau, h=tau))
        vectors = (forward - backward) / (2 * tau)
    else:
        logger.warning("%s is not reversible: first order differences",
                       field.name)
        vectors = (forward - u(pts)) / tau
    return DirectionalDerivative(pts, vectors, tau, field.reversible,
                                 u.target)


def linearity_check(u, field_1, field_2, points, tau=None, alphas=(1.0, 1.0)):
    """max over points of |dd(a1 Z1 + a2 Z2) - a1 dd(Z1) - a2 dd(Z2)|_Y"""
    a1, a2 = alphas
    combined = field_1.scaled(a1) + field_2.scaled(a2)
    total = directional_derivative(u, combined, points, tau).vectors
    part_1 = directional_derivative(u, field_1, points, tau).vectors
    part_2 = directional_derivative(u, field_2, points, tau).vectors
    return float(np.max(u.target.norm(total - a1 * part_1 - a2 * part_2)))


def _relative_scale(values, floor=1e-3):
    return max(floor * float(np.max(values)) if values.size else 0.0, 1e-12)


def scaling_check(u, field, alpha, domain, sample, eps_list, p=2):
    """
    Max relative deviation between |du(alpha Z)| and |alpha| |du(Z)| over the
    nodes unmasked for both fields.
    """
    base = directional_gradient(u, field, domain, p, eps_list, sample)
    scaled = directional_gradient(u, field.scaled(alpha), domain, p,
                                  eps_list, sample)
    valid = ~(base.masked_final | scaled.masked_final)
    expected = abs(alpha) * base.H[valid]
    scale = np.maximum(expected, _relative_scale(expected))
    if not np.any(valid):
        raise InvalidInputError("Every node is masked")
    return float(np.max(np.abs(scaled.H[valid] - expected) / scale))


def _pair_reports(u, field_1, field_2, domain, sample, eps_list, p,
                  combos):
    reports = [directional_gradient(u, f, domain, p, eps_list, sample)
               for f in [field_1, field_2] + combos]
    valid = ~np.any([r.masked_final for r in reports], axis=0)
    if not np.any(valid):
        raise InvalidInputError("Every node is masked")
    return reports, valid


def triangle_slack(u, field_1, field_2, domain, sample, eps_list, p=2):
    """Pointwise |du(Z1)| + |du(Z2)| - |du(Z1+Z2)| and the valid-node mask"""
    reports, valid = _pair_reports(u, field_1, field_2, domain, sample,
                                   eps_list, p, [field_1 + field_2])
    first, second, total = reports
    return first.H + second.H - total.H, first.H + second.H, valid


def triangle_check(u, field_1, field_2, domain, sample, eps_list, p=2):
    """
    Worst slack of the triangle inequality for |du(.)|, expected to be
    nonnegative up to tolerance.
    """
    slack, _, valid = triangle_slack(u, field_1, field_2, domain, sample,
                                     eps_list, p)
    return float(np.min(slack[valid]))


def parallelogram_residual(u, field_1, field_2, domain, sample, eps_list):
    """
    |du(Z1+Z2)|^2 + |du(Z1-Z2)|^2 - 2|du(Z1)|^2 - 2|du(Z2)|^2 (p = 2).

    Returns
    -------
    ParallelogramResidual
        pointwise residual, pointwise right side 2(|du(Z1)|^2+|du(Z2)|^2),
        the valid-node mask and the weighted L1 norm of the residual
    """
    reports, valid = _pair_reports(u, field_1, field_2, domain, sample,
                                   eps_list, 2, [field_1 + field_2,
                                                 field_1 - field_2])
    first, second, plus, minus = reports
    rhs = 2 * (first.H ** 2 + second.H ** 2)
    residual = plus.H ** 2 + minus.H ** 2 - rhs
    l1 = float(np.sum(first.weights[valid] * np.abs(residual[valid])))
    return ParallelogramResidual(residual, rhs, valid, l1)


def _unit_directions(dimension, count):
    if dimension == 2:
        angles = np.pi * np.arange(count) / count
        return np.column_stack([np.cos(angles), np.sin(angles)])
    rng = np.random.default_rng(0)
    extra = rng.normal(size=(max(count - dimension, 0), dimension))
    directions = np.vstack([np.eye(dimension), extra])
    return directions / np.linalg.norm(directions, axis=1)[:, None]


def _flow_ratio(u, field, points, tau):
    """d_Y(u(Fl_tau x), u(Fl_-tau x)) / 2 tau, forward when not reversible"""
    forward = u(advance(field, points, tau, h=tau))
    if field.reversible:
        backward = u(advance(field, points, -tau, h=tau))
        return u.target.distance(forward, backward) / (2 * tau)
    return u.target.distance(forward, u(points)) / tau


def postcomposition_gradient(u, field, points, directions=64, tau=None):
    """
    Slope |d'u|(x) as the max over unit directions v of the central
    difference d_Y(u(x + tau v), u(x - tau v)) / 2 tau, together with
    |du(Z)| and the slack |d'u| |Z| - |du(Z)| of the link inequality.
    """
    pts, _ = as_points(points, u.dimension)
    tau = _default_tau(None) if tau is None else float(tau)
    slope = np.zeros(len(pts))
    for v in _unit_directions(u.dimension, int(directions)):
        ratio = u.target.distance(u(pts + tau * v), u(pts - tau * v)) / (
            2 * tau)
        slope = np.maximum(slope, ratio)
    directional = _flow_ratio(u, field, pts, tau)
    speed = np.linalg.norm(field(pts), axis=1)
    return LinkEstimate(slope, directional, slope * speed - directional)


def _trajectory(field, points, times):
    times = np.asarray(times, dtype=float)
    if times.size < 3 or times[0] != 0:
        raise InvalidInputError("Need a time grid of >= 3 times from 0")
    positions = [np.array(points, dtype=float)]
    for k in range(1, len(times)):
        positions.append(advance(field, positions[-1],
                                 times[k] - times[k - 1], h=DEFAULT_H))
    return times, positions


def regularity_check(u, field, f, points, times, tau=None, lip=1.0):
    """
    Max positive excess of |d/dt f(u(Fl_t x))| over lip(f) |du(Z)|(Fl_t x)
    at interior times of the grid.

    Parameters
    ----------
    u : MetricMap
        the map
    field : VectorField
        direction
    f : callable
        Lipschitz function on the target, e.g. a LipschitzFamily member
    points : array_like
        start points, far enough from the boundary for the whole grid
    times : sequence of float
        uniform grid starting at 0
    tau : float, optional
        difference step for |du(Z)|
    lip : float
        Lipschitz bound of f

    Returns
    -------
    float
        the worst excess, 0 when the bound holds everywhere
    """
    tau = _default_tau(None) if tau is None else float(tau)
    times, positions = _trajectory(field, points, times)
    values = [np.asarray(f(u(x)), dtype=float) for x in positions]
    worst = 0.0
    for k in range(1, len(times) - 1):
        derivative = np.abs(values[k + 1] - values[k - 1]) / (
            times[k + 1] - times[k - 1])
        bound = lip * _flow_ratio(u, field, positions[k], tau)
        worst = max(worst, float(np.max(derivative - bound)))
    return worst


def upper_gradient_check(u, field, points, times, tau=None):
    """
    Max excess of d_Y(u(Fl_t x), u(x)) over int_0^t |du(Z)|(Fl_r x) dr
    (trapezoidal rule) over the grid times.
    """
    tau = _default_tau(None) if tau is None else float(tau)
    times, positions = _trajectory(field, points, times)
    speeds = [_flow_ratio(u, field, x, tau) for x in positions]
    start = u(positions[0])
    integral = np.zeros(len(positions[0]))
    worst = -np.inf
    for k in range(1, len(times)):
        integral += 0.5 * (times[k] - times[k - 1]) * (speeds[k]
                                                       + speeds[k - 1])
        gap = u.target.distance(u(positions[k]), start)
        worst = max(worst, float(np.max(gap - integral)))
    return worst


def incremental_ratio_gaps(g, field, points, weights, t, eps_list, p=2):
    """
    L^p(weights) distances between (g(Fl_{t+eps}) - g(Fl_t)) / eps and
    dg(Z)(Fl_t) along eps_list.
    """
    base = advance(field, points, t, h=DEFAULT_H)
    derivative = np.sum(g.gradient(base) * field(base), axis=1)
    gaps = []
    for eps in _check_eps_list(eps_list):
        ratio = (g(flow_for_energy(field, base, eps)) - g(base)) / eps
        gaps.append(float(np.dot(weights, np.abs(ratio - derivative) ** p)
                          ** (1.0 / p)))
    return np.asarray(gaps)


def link_slack_ratio(estimate):
    """Worst slack relative to the local scale |du(Z)|"""
    scale = np.maximum(estimate.directional, 1e-12)
    return float(np.min(estimate.slack / scale))


def closed_form_energy_disk_rotation(radius=1.0, p=2):
    """int_{|x|<R} |x|^p dx, the rotation energy of the identity map"""
    return 2 * math.pi * radius ** (p + 2) / (p + 2)
