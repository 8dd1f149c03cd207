# -*- coding: utf-8 -*-

"""
ks_flowlab.flows

Particle flows of regular vector fields integrated with the classical
fourth order Runge-Kutta scheme, push-forward densities as histograms, and
the diagnostics tying flows to the continuity equation: speed identity,
compression bound, convergence in measure of flows and the interleaved
densities of the splitting scheme.
"""

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ks_flowlab.errors import FlowLabError, InvalidInputError, MassLeakError
from ks_flowlab.fields import ALIGN_TOLERANCE, TimeDependentField, steps_for, \
    trotter_field
from ks_flowlab.metric_core import as_points, sample_measure

logger = logging.getLogger(__name__)


def rk4_step(field, x, h):
    """One classical Runge-Kutta step of size h for the autonomous field"""
    k1 = field(x)
    k2 = field(x + 0.5 * h * k1)
    k3 = field(x + 0.5 * h * k2)
    k4 = field(x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class FlowMap(object):
    """
    Seeds and their trajectories on a uniform time grid.

    Parameters
    ----------
    seeds : numpy.ndarray
        (n, d) initial points
    weights : numpy.ndarray
        (n,) seed weights
    times : numpy.ndarray
        (m,) uniform recording times, starting at 0
    trajectories : numpy.ndarray
        (m, n, d) positions, trajectories[0] == seeds
    field : TimeDependentField
        the integrated field
    """

    def __init__(self, seeds, weights, times, trajectories, field):
        self.seeds = seeds
        self.weights = weights
        self.times = times
        self.trajectories = trajectories
        self.field = field

    def __len__(self):
        return len(self.seeds)

    @property
    def horizon(self):
        return float(self.times[-1])

    @property
    def step(self):
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 \
            else 0.0

    def positions(self, index):
        return self.trajectories[index]

    def index_of(self, t):
        if len(self.times) == 1:
            if abs(t) > 1e-12:
                raise InvalidInputError("Time {} not recorded".format(t))
            return 0
        index = steps_for(t, self.step)
        if index is None or not 0 <= index < len(self.times):
            raise InvalidInputError("Time {} not on the flow grid".format(t))
        return index

    def to_csv(self, path, every=1):
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["seed", "t"] + ["x{}".format(i) for i in
                                             range(self.seeds.shape[1])])
            for k in range(0, len(self.times), every):
                for i, position in enumerate(self.trajectories[k]):
                    writer.writerow([i, repr(float(self.times[k]))]
                                    + [repr(float(v)) for v in position])


def integrate_flow(field, seeds, horizon, h, weights=None, stride=1,
                   threads=1):
    """
    Integrates trajectories of a (piecewise constant in time) field.

    Parameters
    ----------
    field : VectorField or TimeDependentField
        the field; a VectorField is taken constant in time
    seeds : array_like
        (n, d) initial points
    horizon : float
        final time
    h : float
        step, dividing the horizon and every switching time before it
    weights : array_like, optional
        seed weights, defaults to uniform probability weights
    stride : int
        record every stride steps
    threads : int
        worker threads; the result does not depend on it

    Returns
    -------
    FlowMap
        trajectories recorded at multiples of stride * h
    """
    tfield = TimeDependentField.wrap(field, max(horizon, h))
    seeds, _ = as_points(seeds, tfield.dimension)
    if horizon < 0 or horizon > tfield.horizon * (1 + 1e-12):
        raise InvalidInputError(
            "Horizon {} outside the field's time range".format(horizon))
    steps = steps_for(horizon, h)
    if steps is None:
        raise InvalidInputError(
            "Step {!r} does not divide the horizon {!r}".format(h, horizon))
    for t in tfield.switching_times:
        if t < horizon and steps_for(t, h) is None:
            raise InvalidInputError(
                "Step {!r} is not aligned with the switching time {!r}".format(
                    h, t))
    stride = int(stride)
    if stride < 1 or steps % stride:
        raise InvalidInputError("Stride must divide the number of steps")
    if weights is None:
        weights = np.full(len(seeds), 1.0 / len(seeds))
    weights = np.asarray(weights, dtype=float)

    def run(chunk):
        x = chunk.copy()
        recorded = [x.copy()]
        for k in range(steps):
            x = rk4_step(tfield.field_at(k * h), x, h)
            if (k + 1) % stride == 0:
                recorded.append(x.copy())
        return np.stack(recorded)

    threads = max(1, min(int(threads), len(seeds)))
    chunks = np.array_split(seeds, threads)
    if threads == 1:
        parts = [run(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            parts = list(executor.map(run, chunks))
    trajectories = np.concatenate(parts, axis=1)
    if not np.all(np.isfinite(trajectories)):
        raise FlowLabError("Non-finite positions while integrating flow")
    times = h * stride * np.arange(steps // stride + 1)
    logger.debug("Integrated %d seeds over [0, %g] with h=%g", len(seeds),
                 horizon, h)
    return FlowMap(seeds, weights, times, trajectories, tfield)


def reference_flow(field, seeds, horizon, h, refine=10, stride=1,
                   weights=None, threads=1):
    """Direct integration at step h / refine recorded on the h * stride grid"""
    return integrate_flow(field, seeds, horizon, h / refine, weights=weights,
                          stride=stride * refine, threads=threads)


def advance(field, points, t, h=1e-3, min_steps=1):
    """
    Positions Fl^Z_t(x) of an autonomous field for any real t; negative
    times flow -Z and need -Z regular. The step is shrunk to divide |t|.
    """
    pts, single = as_points(points, field.dimension)
    if t == 0:
        return pts[0].copy() if single else pts.copy()
    if t < 0:
        if not field.reversible:
            raise InvalidInputError(
                "{} cannot be flowed backwards".format(field.name))
        field = -field
    steps = max(int(min_steps), int(math.ceil(abs(t) / h - 1e-9)))
    step = abs(t) / steps
    x = pts.copy()
    for _ in range(steps):
        x = rk4_step(field, x, step)
    return x[0] if single else x


def seed_particles(domain, n, seed):
    """
    Particles for the uniform probability density on the domain: the inside
    nodes of sample_measure with weights normalised to total mass one.
    """
    sample = sample_measure(domain, n, seed)
    inside = sample.weights > 0
    weights = sample.weights[inside]
    return sample.points[inside], weights / np.sum(weights)


class GridSpec(object):
    """A regular grid of cells over an axis-aligned box"""

    def __init__(self, low, high, shape):
        self.low = np.asarray(low, dtype=float)
        self.high = np.asarray(high, dtype=float)
        self.shape = tuple(int(s) for s in np.broadcast_to(
            np.asarray(shape), self.low.shape))
        if np.any(self.high <= self.low) or min(self.shape) < 1:
            raise InvalidInputError("Degenerate density grid")
        self.edges = [np.linspace(lo, hi, n + 1) for lo, hi, n in
                      zip(self.low, self.high, self.shape)]

    def __eq__(self, other):
        return isinstance(other, GridSpec) and self.shape == other.shape and \
            np.array_equal(self.low, other.low) and \
            np.array_equal(self.high, other.high)

    def __ne__(self, other):
        return not self == other

    @classmethod
    def for_domain(cls, domain, cells=64, padding=0.0):
        """cells per axis over the domain's box grown by padding"""
        return cls(domain.low - padding, domain.high + padding, cells)

    @property
    def cell_volume(self):
        return float(np.prod((self.high - self.low) / np.asarray(self.shape)))

    @property
    def centers(self):
        """Cell centers as an (ncells, d) array in C order"""
        mids = [0.5 * (e[:-1] + e[1:]) for e in self.edges]
        mesh = np.meshgrid(*mids, indexing="ij")
        return np.column_stack([m.reshape(-1) for m in mesh])

    def covers(self, points):
        return np.all((points >= self.low) & (points <= self.high), axis=1)


class DensityGrid(object):
    """
    Histogram of a weighted particle cloud: cell masses on a GridSpec at a
    given time slice.
    """

    def __init__(self, grid, masses, time_index, time):
        self.grid = grid
        self.masses = masses
        self.time_index = int(time_index)
        self.time = float(time)

    @property
    def total_mass(self):
        return float(np.sum(self.masses))

    def density(self, domain=None):
        """Cell density w.r.t. m (Lebesgue measure unless a domain is given)"""
        volume = self.grid.cell_volume
        if domain is not None:
            volume = volume * domain.density(self.grid.centers).reshape(
                self.masses.shape)
        return self.masses / volume

    def sup_density(self, domain=None):
        return float(np.max(self.density(domain)))

    def integrate(self, func):
        """Approximates the integral of func against the density"""
        values = np.asarray(func(self.grid.centers), dtype=float)
        return float(np.dot(self.masses.reshape(-1), values))

    def to_csv(self, path):
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["cell_{}".format(i) for i in
                             range(len(self.grid.shape))] + ["mass"])
            for index in zip(*np.nonzero(self.masses)):
                writer.writerow(list(index)
                                + [repr(float(self.masses[index]))])


def histogram(positions, weights, grid, time_index=0, time=0.0):
    """Bins weighted positions, raising MassLeakError for uncovered mass"""
    covered = grid.covers(positions)
    total = float(np.sum(weights))
    if not np.all(covered):
        leaked = float(np.sum(weights[~covered])) / total
        raise MassLeakError(leaked)
    masses, _ = np.histogramdd(positions, bins=grid.edges, weights=weights)
    return DensityGrid(grid, masses, time_index, time)


def pushforward_density(flow_map, grid, t_index):
    """
    Density of the push-forward of the seed measure at a recorded time.

    Parameters
    ----------
    flow_map : FlowMap
        seeds drawn from rho_0 m with matching weights
    grid : GridSpec
        cells covering every position at that time
    t_index : int
        index into flow_map.times

    Returns
    -------
    DensityGrid
        cell masses; total mass equals the seed mass
    """
    return histogram(flow_map.positions(t_index), flow_map.weights, grid,
                     t_index, flow_map.times[t_index])


def flow_speed_identity(flow_map, field=None):
    """
    Max relative error between the central-difference speed of trajectories
    and |Z_t| along them, skipping nodes straddling a switching time.
    """
    tfield = flow_map.field if field is None else \
        TimeDependentField.wrap(field, flow_map.horizon)
    times = flow_map.times
    if len(times) < 3:
        raise InvalidInputError("Speed identity needs three recorded times")
    delta = times[1] - times[0]
    slack = ALIGN_TOLERANCE * max(1.0, flow_map.horizon)
    switches = np.asarray(tfield.switching_times, dtype=float)
    worst = 0.0
    for k in range(1, len(times) - 1):
        # the stencil [t_{k-1}, t_{k+1}] must lie in a single piece
        if np.any((switches > times[k - 1] + slack) &
                  (switches < times[k + 1] - slack)):
            continue
        x = flow_map.trajectories
        speed = np.linalg.norm(x[k + 1] - x[k - 1], axis=1) / (2 * delta)
        exact = np.linalg.norm(tfield.field_at(times[k])(x[k]), axis=1)
        scale = np.where(exact > 1e-12, exact, 1.0)
        worst = max(worst, float(np.max(np.abs(speed - exact) / scale)))
    return worst


def compression_ratio(initial, later, div_neg_integral):
    """
    sup rho_s / (sup rho_t exp(int ||(div Z)^-||)); at most one up to
    sampling noise.
    """
    bound = initial.sup_density() * math.exp(div_neg_integral)
    return later.sup_density() / bound


class SmoothObservable(object):
    """A test function with closed-form gradient"""

    def __init__(self, value, gradient, name="f"):
        self.value = value
        self.gradient = gradient
        self.name = name

    def __call__(self, points):
        return self.value(points)

    @classmethod
    def monomial(cls, powers):
        """x^powers, e.g. (2, 1) for x1^2 x2"""
        powers = np.asarray(powers, dtype=int)

        def value(pts):
            return np.prod(pts ** powers, axis=1)

        def gradient(pts):
            grads = []
            for i, power in enumerate(powers):
                if power == 0:
                    grads.append(np.zeros(len(pts)))
                    continue
                lowered = powers.copy()
                lowered[i] -= 1
                grads.append(power * np.prod(pts ** lowered, axis=1))
            return np.column_stack(grads)

        return cls(value, gradient,
                   "x^({})".format(",".join(str(p) for p in powers)))

    @classmethod
    def squared_radius(cls):
        return cls(lambda pts: np.sum(pts ** 2, axis=1), lambda pts: 2 * pts,
                   "|x|^2")


def continuity_residuals(densities, field, observables):
    """
    Residuals d/dt int f rho_t - int df(Z_t) rho_t at interior slices, one
    row per observable.
    """
    if len(densities) < 3:
        raise InvalidInputError("Continuity residual needs >= 3 time slices")
    grid = densities[0].grid
    if any(d.grid != grid for d in densities):
        raise InvalidInputError("Densities must share one grid")
    times = np.asarray([d.time for d in densities])
    tfield = TimeDependentField.wrap(field, max(times[-1], 1e-12))
    centers = grid.centers
    rows = []
    for f in observables:
        moments = np.asarray([d.integrate(f) for d in densities])
        row = []
        for k in range(1, len(densities) - 1):
            lhs = (moments[k + 1] - moments[k - 1]) / (times[k + 1]
                                                       - times[k - 1])
            drift = np.sum(f.gradient(centers)
                           * tfield.field_at(times[k])(centers), axis=1)
            rhs = float(np.dot(densities[k].masses.reshape(-1), drift))
            row.append(lhs - rhs)
        rows.append(row)
    return np.asarray(rows)


def continuity_residual(densities, field, observables):
    """Max absolute continuity-equation residual over tests and times"""
    return float(np.max(np.abs(continuity_residuals(densities, field,
                                                    observables))))


def local_convergence_distance(flow_a, flow_b, weights=None):
    """
    d(Fl, Fl') = int 1 ^ sup_t |Fl_t(x) - Fl'_t(x)| dm'(x) with m' the
    normalised seed weights.

    Parameters
    ----------
    flow_a, flow_b : FlowMap
        flows on identical seeds and time grids
    weights : array_like, optional
        weights of m', defaults to flow_a's seed weights

    Returns
    -------
    float
        distance in [0, 1]
    """
    if flow_a.seeds.shape != flow_b.seeds.shape or \
            not np.array_equal(flow_a.seeds, flow_b.seeds):
        raise InvalidInputError("Flow maps have different seeds")
    if len(flow_a.times) != len(flow_b.times) or \
            not np.allclose(flow_a.times, flow_b.times, rtol=0, atol=1e-12):
        raise InvalidInputError("Flow maps have different time grids")
    weights = flow_a.weights if weights is None else np.asarray(weights)
    weights = weights / np.sum(weights)
    gap = np.linalg.norm(flow_a.trajectories - flow_b.trajectories, axis=2)
    return float(np.dot(weights, np.minimum(1.0, np.max(gap, axis=0))))


def flow_scaling_deviation(field, alpha, seeds, t, h=1e-3):
    """max over seeds of |Fl^{alpha Z}_t(x) - Fl^Z_{alpha t}(x)|"""
    scaled = advance(field.scaled(alpha), seeds, t, h)
    direct = advance(field, seeds, alpha * t, h)
    return float(np.max(np.linalg.norm(scaled - direct, axis=-1)))


def _flow_positions(field, seeds, horizon, h, threads=1):
    flow_map = integrate_flow(field, seeds, horizon, h,
                              stride=max(1, steps_for(horizon, h) or 1),
                              threads=threads)
    return flow_map.positions(len(flow_map.times) - 1)


def interleaved_nodes(level, t):
    """
    The even and odd dyadic nodes 2i/2^n <= t and (2i+1)/2^n <= t where the
    interleaved densities switch to the flow of Z1 alone; the odd node is
    clamped to 0 before the first odd interval.
    """
    count = 2 ** int(level)
    even = 2 * math.floor(t * count / 2 + 1e-12) / count
    odd = (2 * math.floor((t * count - 1) / 2 + 1e-12) + 1) / count
    return even, max(odd, 0.0)


def interleaved_densities(field_1, field_2, level, seeds, weights, t, h, grid,
                          threads=1):
    """
    The densities rho^1_{n,t} and rho^2_{n,t}: flow the splitting field to
    the last even (resp. odd) dyadic node before t, then flow Z1 alone for
    the remaining time.

    Parameters
    ----------
    field_1, field_2 : VectorField
        the split fields
    level : int
        dyadic level n
    seeds, weights : numpy.ndarray
        particles of rho_0 m
    t : float
        time in [0, 1), a multiple of h
    h : float
        integration step dividing 2^-n
    grid : GridSpec
        histogram cells

    Returns
    -------
    tuple
        (rho^1_{n,t}, rho^2_{n,t}) as DensityGrid
    """
    if not 0 <= t < 1:
        raise InvalidInputError("t must lie in [0, 1)")
    split = trotter_field(field_1, field_2, level)
    result = []
    for node in interleaved_nodes(level, t):
        positions = _flow_positions(split, seeds, node, h, threads)
        # nodes within rounding of t leave no time for Z1
        positions = _flow_positions(field_1, positions, max(0.0, t - node), h,
                                    threads)
        result.append(histogram(positions, weights, grid, 0, t))
    return tuple(result)
