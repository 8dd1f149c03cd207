# -*- coding: utf-8 -*-

"""
ks_flowlab.curves

Energies and metric speed of curves sampled on a uniform time grid with
values in a target space.
"""

import csv
import logging

import numpy as np

from ks_flowlab.errors import InvalidInputError

logger = logging.getLogger(__name__)

GRID_TOLERANCE = 1e-9


class SampledCurve(object):
    """
    A curve t -> gamma_t sampled at t_i = i dt, i = 0..N.

    Parameters
    ----------
    values : array_like
        N + 1 target points
    dt : float
        grid step
    target : TargetSpace
        space the values live in
    """

    def __init__(self, values, dt, target):
        self.target = target
        self.values = target.coerce(values).reshape(-1, target.dimension)
        self.dt = float(dt)
        if self.dt <= 0:
            raise InvalidInputError("Curve time step must be positive")
        if len(self.values) < 3:
            raise InvalidInputError("A sampled curve needs N >= 2")

    @property
    def n_steps(self):
        return len(self.values) - 1

    @property
    def horizon(self):
        return self.n_steps * self.dt

    @property
    def times(self):
        return self.dt * np.arange(len(self.values))

    @classmethod
    def from_function(cls, func, horizon, n_steps, target):
        """Samples func (vectorised over times) on N = n_steps intervals"""
        times = np.linspace(0.0, horizon, int(n_steps) + 1)
        return cls(func(times), horizon / int(n_steps), target)

    def grid_multiple(self, eps):
        """Returns eps / dt, raising unless it is a positive integer"""
        ratio = eps / self.dt
        steps = int(round(ratio))
        if steps < 1 or abs(ratio - steps) > GRID_TOLERANCE * max(1.0, ratio):
            raise InvalidInputError(
                "eps={!r} is not a multiple of the grid step {!r}".format(
                    eps, self.dt))
        return steps


class CurveEnergyProfile(object):
    """The values E_{p,eps} along a strictly decreasing list of eps"""

    def __init__(self, p, eps, values):
        self.p = float(p)
        self.eps = np.asarray(eps, dtype=float)
        self.values = np.asarray(values, dtype=float)

    @property
    def energy(self):
        """Value at the smallest eps: a lower bound of the limit energy"""
        return float(self.values[-1])

    @property
    def roots(self):
        return self.values ** (1.0 / self.p)

    def tail(self):
        """eps E_{p,eps}^{1/p}, which tends to 0 with eps"""
        return self.eps * self.roots

    def monotonicity_violation(self):
        """
        Largest amount by which a coarser eps beats a finer one in
        E_{p,eps}^{1/p}; nonpositive for exactly monotone profiles.
        """
        roots = self.roots
        worst = -np.inf
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                worst = max(worst, roots[i] - roots[j])
        return float(worst) if np.isfinite(worst) else 0.0

    def to_csv(self, path):
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["eps", "value"])
            for eps, value in zip(self.eps, self.values):
                writer.writerow([repr(float(eps)), repr(float(value))])


def curve_energy_eps(curve, p, eps):
    """
    Left Riemann sum of d_Y(gamma_{t+eps}, gamma_t)^p / eps^p over [0, T-eps].

    Parameters
    ----------
    curve : SampledCurve
        the curve
    p : float
        exponent, p > 1
    eps : float
        positive multiple of the grid step, smaller than the horizon

    Returns
    -------
    float
        E_{p,eps}(gamma)
    """
    if p <= 1:
        raise InvalidInputError("Exponent p must exceed 1")
    if not 0 < eps < curve.horizon:
        raise InvalidInputError("eps must lie in (0, T)")
    shift = curve.grid_multiple(eps)
    values = curve.values
    gaps = curve.target.distance(values[shift:-1], values[:-shift - 1])
    return float(np.sum((gaps / eps) ** p) * curve.dt)


def curve_energy(curve, p, eps_list):
    """
    Energy profile over eps_list; the extrapolated energy is the value at the
    smallest eps, the values increasing towards the limit as eps decreases.
    """
    eps = np.sort(np.asarray(eps_list, dtype=float))[::-1]
    if eps.size == 0:
        raise InvalidInputError("eps list is empty")
    if np.any(np.diff(eps) == 0):
        raise InvalidInputError("eps list has repeated values")
    values = [curve_energy_eps(curve, p, e) for e in eps]
    profile = CurveEnergyProfile(p, eps, values)
    logger.debug("Curve energy profile p=%g: %s", p, profile.values)
    return profile


def metric_speeds(curve):
    """Metric speed at every node: central inside, one-sided at endpoints"""
    values = curve.values
    dist = curve.target.distance
    speeds = np.empty(len(values))
    speeds[1:-1] = dist(values[2:], values[:-2]) / (2 * curve.dt)
    speeds[0] = dist(values[1], values[0]) / curve.dt
    speeds[-1] = dist(values[-1], values[-2]) / curve.dt
    return speeds


def metric_speed(curve, i):
    """
    Metric speed |gamma'| at grid index i.

    Parameters
    ----------
    curve : SampledCurve
        the curve
    i : int
        grid index in [0, N]

    Returns
    -------
    float
        symmetric difference quotient (one-sided at the endpoints)
    """
    if not 0 <= i <= curve.n_steps:
        raise InvalidInputError(
            "Index {} outside [0, {}]".format(i, curve.n_steps))
    values = curve.values
    dist = curve.target.distance
    if i == 0:
        return dist(values[1], values[0]) / curve.dt
    if i == curve.n_steps:
        return dist(values[i], values[i - 1]) / curve.dt
    return dist(values[i + 1], values[i - 1]) / (2 * curve.dt)


def speed_convergence_order(func, horizon, n_steps, target, speed):
    """
    Observed order of the central metric speed against a closed form speed,
    from the interior max errors at N and 2N steps.
    """
    errors = []
    for steps in (n_steps, 2 * n_steps):
        curve = SampledCurve.from_function(func, horizon, steps, target)
        exact = speed(curve.times)
        errors.append(np.max(np.abs(metric_speeds(curve) - exact)[1:-1]))
    if errors[1] == 0:
        return np.inf
    return float(np.log2(errors[0] / errors[1]))


def chain_rule_check(curve, phi, lip_phi, image_target):
    """
    Max over interior nodes of |(phi o gamma)'| - lip(phi)(gamma) |gamma'|.

    Parameters
    ----------
    curve : SampledCurve
        the curve
    phi : callable
        vectorised map from target points to points of image_target
    lip_phi : callable
        vectorised pointwise Lipschitz estimate of phi
    image_target : TargetSpace
        the space phi maps into

    Returns
    -------
    float
        the worst violation, expected below the discretisation tolerance
    """
    image = SampledCurve(phi(curve.values), curve.dt, image_target)
    lhs = metric_speeds(image)[1:-1]
    rhs = np.asarray(lip_phi(curve.values), dtype=float).reshape(-1)[1:-1] * \
        metric_speeds(curve)[1:-1]
    return float(np.max(lhs - rhs))


def subadditivity_gap(curve, p, eps, weights):
    """
    E_{p,eps}^{1/p} - sum_i l_i E_{p,l_i eps}^{1/p} for convex weights l_i
    with every l_i eps on the grid; nonpositive up to discretisation.
    """
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(np.sum(weights) - 1.0) > 1e-12:
        raise InvalidInputError("Weights must be convex")
    lhs = curve_energy_eps(curve, p, eps) ** (1.0 / p)
    rhs = sum(w * curve_energy_eps(curve, p, w * eps) ** (1.0 / p)
              for w in weights if w > 0)
    return float(lhs - rhs)


def read_curve_csv(path, target):
    """
    Reads a curve from CSV with a header row and columns t then the
    coordinates (or edge, coord for trees).
    """
    with open(path, newline="") as handle:
        rows = [row for row in csv.reader(handle) if row]
    data = np.asarray([[float(v) for v in row] for row in rows[1:]])
    times = data[:, 0]
    steps = np.diff(times)
    if np.any(np.abs(steps - steps[0]) > GRID_TOLERANCE * max(1.0, steps[0])):
        raise InvalidInputError("Curve {} is not on a uniform grid".format(path))
    return SampledCurve(data[:, 1:], steps[0], target)


def write_curve_csv(curve, path):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        if curve.target.is_tree:
            writer.writerow(["t", "edge", "coord"])
        else:
            writer.writerow(["t"] + ["y{}".format(i)
                                     for i in range(curve.target.dimension)])
        for t, value in zip(curve.times, curve.values):
            writer.writerow([repr(float(t))] + [repr(float(v)) for v in value])
