# -*- coding: utf-8 -*-

"""
ks_flowlab.scenarios

Named experiments. Each scenario is a compliance-checker check class whose
``check_*`` methods return one Result per acceptance check, carrying the
measured value and the bound it was compared with.
"""

import csv
import json
import logging
import math
import os
import time
from collections import OrderedDict, namedtuple

import numpy as np
from compliance_checker.base import BaseCheck, Result

from ks_flowlab.curves import SampledCurve, chain_rule_check, curve_energy, \
    curve_energy_eps, metric_speeds, speed_convergence_order, \
    subadditivity_gap
from ks_flowlab.errors import MassLeakError, UnknownTagError, \
    UnsupportedTargetError
from ks_flowlab.fields import Mollifier, TimeDependentField, VectorField, \
    field_l1_distance, mollify_field, steps_for, trotter_field
from ks_flowlab.flows import GridSpec, SmoothObservable, compression_ratio, \
    continuity_residual, flow_scaling_deviation, flow_speed_identity, \
    histogram, integrate_flow, interleaved_densities, \
    local_convergence_distance, pushforward_density, reference_flow, \
    seed_particles
from ks_flowlab.ks_energy import Cutoff, closed_form_energy_disk_rotation, \
    directional_derivative, directional_gradient, energy_functional, \
    escape_time, escape_time_of_set, incremental_ratio_gaps, \
    linearity_check, parallelogram_residual, postcomposition_gradient, \
    regularity_check, scaling_check, triangle_slack, upper_gradient_check
from ks_flowlab.maps import MetricMap, sector_singular_distance
from ks_flowlab.metric_core import MeasureSample, SourceDomain, TargetSpace, \
    build_lipschitz_family, dist_to_complement, metric_axiom_violation, \
    sample_measure
from ks_flowlab.report import RunReport, utc_now
from ks_flowlab.scenario_config import ScenarioConfig

logger = logging.getLogger(__name__)

CatalogEntry = namedtuple("CatalogEntry",
                          ["name", "description", "topic", "statement",
                           "config"])


def _plain(value):
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def relative_error(measured, expected, floor):
    """|measured - expected| / max(|expected|, floor), elementwise"""
    measured = np.asarray(measured, dtype=float)
    expected = np.asarray(expected, dtype=float)
    return np.abs(measured - expected) / np.maximum(np.abs(expected), floor)


def interior_sample(domain, sample, margin, keep=None):
    """The nodes of sample inside the domain at distance >= margin"""
    inside = sample.weights > 0
    index = np.nonzero(inside)[0]
    index = index[dist_to_complement(domain, sample.points[index]) >= margin]
    if keep is not None:
        index = index[keep(sample.points[index])]
    return MeasureSample(sample.points[index], sample.weights[index],
                         sample.inside[index])


def _ratio(last, first):
    if first > 0:
        return last / first
    return 0.0 if last == 0 else np.inf


class ScenarioResult(Result):
    """A Result carrying the measured value and the bound of a check"""

    def __init__(self, weight, value, name, msgs, measured=None, bound=None):
        super(ScenarioResult, self).__init__(weight, value, name, msgs)
        self.measured = measured
        self.bound = bound

    @property
    def passed(self):
        score, out_of = self.value
        return score == out_of

    def serialize(self):
        data = super(ScenarioResult, self).serialize()
        return {
            "name": data["name"],
            "weight": data["weight"],
            "value": list(data["value"]),
            "msgs": list(data["msgs"]),
            "measured": _plain(self.measured),
            "bound": _plain(self.bound),
            "passed": self.passed,
        }


class Scenario(BaseCheck):
    """
    Base class of the scenarios: resolves the configured domain, target,
    map and fields, runs the check methods and writes artifacts.

    Parameters
    ----------
    config : ScenarioConfig, optional
        explicit knobs; the scenario defaults fill the rest
    write : bool
        whether artifacts go to the output directory
    """

    name = None
    description = ""
    topic = ""
    statement = ""
    defaults = {}

    def __init__(self, config=None, write=False):
        super(Scenario, self).__init__()
        config = config if config is not None else ScenarioConfig()
        self.config = config.with_defaults(
            dict(self.defaults, scenario=self.name)).validate()
        self.write = bool(write)
        self.artifacts = []
        self._cache = {}

    @classmethod
    def default_config(cls):
        return ScenarioConfig(dict(cls.defaults, scenario=cls.name))

    @classmethod
    def make_result(cls, level, score, out_of, name, messages, measured=None,
                    bound=None):
        """A helper factory method for generating scenario results"""
        return ScenarioResult(level, (score, out_of), name, messages,
                              measured, bound)

    def bounded_result(self, level, name, measured, bound, upper=True,
                       messages=None):
        """Passes when measured <= bound (or >= bound with upper=False)"""
        measured = float(measured)
        passed = measured <= bound if upper else measured >= bound
        messages = list(messages or [])
        if not passed:
            messages.append("{}: measured {:.6g} {} bound {:.6g}".format(
                name, measured, "above" if upper else "below", bound))
        return self.make_result(level, int(passed), 1, name, messages,
                                measured, bound)

    def tolerance_result(self, level, name, measured, expected, rel_tol,
                         messages=None):
        """Passes when measured is within rel_tol of expected"""
        measured, expected = float(measured), float(expected)
        error = abs(measured - expected) / max(abs(expected), 1e-300)
        passed = error <= rel_tol
        messages = list(messages or [])
        if not passed:
            messages.append(
                "{}: {:.6g} differs from {:.6g} by {:.3%} (tolerance "
                "{:.3%})".format(name, measured, expected, error, rel_tol))
        return self.make_result(level, int(passed), 1, name, messages,
                                measured, expected)

    def checks(self):
        return [getattr(self, attr) for attr in sorted(dir(type(self)))
                if attr.startswith("check_")]

    @staticmethod
    def _check_title(check):
        """Readable result name of a check method, check_foo_bar -> Foo bar"""
        title = check.__name__[len("check_"):].replace("_", " ")
        return title[:1].upper() + title[1:]

    def run(self):
        results = []
        for check in self.checks():
            logger.info("%s: %s", self.name, check.__name__)
            try:
                result = check()
            except MassLeakError as e:
                result = self.make_result(
                    BaseCheck.HIGH, 0, 1, self._check_title(check),
                    [str(e), "leaked fraction {:.6g}".format(
                        e.leaked_fraction)], e.leaked_fraction, 0.0)
            except UnsupportedTargetError as e:
                result = self.make_result(BaseCheck.HIGH, 0, 1,
                                          self._check_title(check), [str(e)])
            results.append(result)
        return results

    def _cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def domain(self):
        return self._cached("domain",
                            lambda: SourceDomain.from_tag(self.config.domain))

    @property
    def target(self):
        return self._cached("target",
                            lambda: TargetSpace.from_tag(self.config.target))

    @property
    def map(self):
        return self._cached("map", lambda: MetricMap.from_tag(self.config.map,
                                                              self.target))

    @property
    def field_1(self):
        return self._cached("field1", lambda: VectorField.from_tag(
            self.config.field1, self.domain))

    @property
    def field_2(self):
        return self._cached("field2", lambda: VectorField.from_tag(
            self.config.field2, self.domain))

    @property
    def sample(self):
        return self._cached("sample", lambda: sample_measure(
            self.domain, self.config.samples, self.config.seed))

    @property
    def particles(self):
        return self._cached("particles", lambda: seed_particles(
            self.domain, self.config.particles, self.config.seed))

    def artifact_path(self, filename):
        """Path for an artifact, or None when the run writes nothing"""
        if not self.write:
            return None
        if not os.path.isdir(self.config.out):
            os.makedirs(self.config.out)
        path = os.path.join(self.config.out, filename)
        if path not in self.artifacts:
            self.artifacts.append(path)
        return path

    def write_rows(self, filename, header, rows):
        path = self.artifact_path(filename)
        if path is None:
            return
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            for row in rows:
                writer.writerow([repr(float(v)) if isinstance(
                    v, (float, np.floating)) else v for v in row])


class RotationEnergyScenario(Scenario):
    name = "rotation-energy"
    description = ("Directional energy of the identity map along the "
                   "rotation field on the unit disk")
    topic = ("energy densities converge to |du(Z)| and the energy is the "
             "integral of its p-th power")
    statement = ("directional energy as the integral of |du(Z)|^p, "
                 "with densities converging in L^p")
    defaults = {"domain": "disk(1)", "target": "normed(2,l2)",
                "map": "identity", "field1": "rotation", "samples": 100000}

    INNER_RADIUS = 0.1
    OUTER_MARGIN = 0.2
    DENSITY_TOLERANCE = 0.01
    ENERGY_TOLERANCE = 0.02
    REPORT_POINTS = 2000

    @property
    def energy_report(self):
        def build():
            report = directional_gradient(self.map, self.field_1,
                                          self.domain, self.config.p,
                                          self.config.eps, self.sample)
            path = self.artifact_path("energy.json")
            if path is not None:
                with open(path, "w") as handle:
                    json.dump(report.to_json(self.REPORT_POINTS), handle,
                              indent=2, sort_keys=True)
            path = self.artifact_path("energy_profile.csv")
            if path is not None:
                report.to_csv(path)
            return report
        return self._cached("energy_report", build)

    def _oracle_power(self, points):
        return self.map.oracle(points, self.field_1) ** self.config.p

    def check_density_matches_closed_form(self):
        """|du(Z)| against the map's closed form away from center and rim"""
        name = "Energy density matches closed form"
        report = self.energy_report
        if self.map.oracle is None:
            return self.make_result(BaseCheck.HIGH, 0, 1, name, [
                "Map {} has no closed-form gradient".format(self.map.name)])
        scale = self.domain.max_norm
        radius = np.linalg.norm(report.points, axis=1)
        margin = self.domain.dist_to_complement(report.points)
        keep = (radius >= self.INNER_RADIUS * scale) & \
            (margin >= self.OUTER_MARGIN * scale) & ~report.masked_final
        expected = self.map.oracle(report.points[keep], self.field_1)
        errors = relative_error(report.H[keep], expected, 1e-2)
        self.write_rows("density_errors.csv", ["x1", "x2", "H", "expected"],
                        [list(x) + [h, e] for x, h, e in
                         zip(report.points[keep][:self.REPORT_POINTS],
                             report.H[keep], expected)])
        return self.bounded_result(BaseCheck.HIGH, name,
                                   np.max(errors) if errors.size else 0.0,
                                   self.DENSITY_TOLERANCE)

    def _disk_rotation(self):
        """Whether the run is the identity along the rotation on a centered
        disk into a Euclidean target"""
        domain = self.domain
        return self.map.name == "identity" and self.target.is_hilbert \
            and self.field_1.name == "rotation" \
            and domain.name.startswith("disk(") \
            and np.allclose(domain.low + domain.high, 0.0)

    def check_energy_matches_closed_form(self):
        """E against 2 pi R^(p+2) / (p+2), pi / 2 on the unit disk"""
        name = "Energy matches closed form"
        if not self._disk_rotation():
            return self.make_result(BaseCheck.HIGH, 1, 1, name, [
                "No closed-form energy for {} along {} on {}".format(
                    self.map.name, self.field_1.name, self.domain.name)])
        expected = closed_form_energy_disk_rotation(self.domain.max_norm,
                                                    self.config.p)
        return self.tolerance_result(BaseCheck.HIGH, name,
                                     self.energy_report.energy, expected,
                                     self.ENERGY_TOLERANCE)

    def check_energy_matches_density_quadrature(self):
        name = "Energy matches quadrature of exact density"
        report = self.energy_report
        if self.map.oracle is None:
            return self.make_result(BaseCheck.MEDIUM, 0, 1, name, [
                "Map {} has no closed-form gradient".format(self.map.name)])
        expected = float(np.dot(report.weights,
                                self._oracle_power(report.points)))
        return self.tolerance_result(BaseCheck.MEDIUM, name, report.energy,
                                     expected, self.ENERGY_TOLERANCE)

    def check_energy_functional_with_cutoff(self):
        """E_{p,eps}(phi) for a radial cutoff at the smallest eps"""
        name = "Cutoff energy functional matches closed form"
        if self.map.oracle is None:
            return self.make_result(BaseCheck.MEDIUM, 0, 1, name, [
                "Map {} has no closed-form gradient".format(self.map.name)])
        scale = self.domain.max_norm
        cutoff = Cutoff.radial(0.8 * scale, 0.9 * scale, 0.1 * scale)
        sample = self.sample
        inside = sample.weights > 0
        if not cutoff.check(self.domain, sample.points[inside]):
            return self.make_result(BaseCheck.MEDIUM, 0, 1, name, [
                "Cutoff does not vanish near the boundary of {}".format(
                    self.domain.name)])
        value = energy_functional(self.map, self.field_1, self.domain,
                                  self.config.p, self.config.eps[-1], cutoff,
                                  sample)
        points = sample.points[inside]
        expected = float(np.dot(sample.weights[inside] * cutoff(points),
                                self._oracle_power(points)))
        return self.tolerance_result(BaseCheck.MEDIUM, name, value, expected,
                                     self.ENERGY_TOLERANCE)

    def check_lp_gaps_decrease(self):
        """L^p gaps between consecutive eps levels shrink"""
        gaps = self.energy_report.lp_gaps
        worst = float(np.max(np.diff(gaps))) if len(gaps) > 1 else 0.0
        return self.bounded_result(BaseCheck.MEDIUM,
                                   "L^p convergence of energy densities",
                                   worst, 0.0)

    def check_no_masking_inside_escape_time(self):
        """Nodes whose escape time exceeds the largest eps are never masked"""
        report = self.energy_report
        times = escape_time(report.points, self.field_1, self.domain)
        interior = times > report.eps[0]
        masked = int(np.sum(report.masked[:, interior]))
        return self.bounded_result(BaseCheck.LOW,
                                   "No masking within escape time", masked, 0)


class TrotterConvergenceScenario(Scenario):
    name = "trotter-convergence"
    description = ("Flows of the dyadic splitting fields against the flow of "
                   "rotation plus translation")
    topic = ("splitting flows converge locally in measure to the flow of "
             "the sum, with interleaved densities converging weakly")
    statement = ("stability of regular Lagrangian flows and the "
                 "splitting formula for Z1 + Z2")
    defaults = {"domain": "disk(2)", "field1": "rotation",
                "field2": "translation(0.3,0)", "particles": 2000}

    RECORDS = 64
    FINAL_THRESHOLD = 0.02
    DECREASE_FACTOR = 3.0
    INTERLEAVED_TIME = 0.5
    SHRINK_RATIO = 0.5
    TESTS = ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))

    def _stride(self):
        steps = steps_for(1.0, self.config.h)
        if steps is not None and steps >= self.RECORDS and \
                steps % self.RECORDS == 0:
            return steps // self.RECORDS
        return 1

    @property
    def reference(self):
        def build():
            seeds, weights = self.particles
            return reference_flow(self.field_1 + self.field_2, seeds, 1.0,
                                  self.config.h, refine=10,
                                  stride=self._stride(), weights=weights,
                                  threads=self.config.threads)
        return self._cached("reference", build)

    @property
    def distances(self):
        def build():
            seeds, weights = self.particles
            result = OrderedDict()
            for level in self.config.levels:
                split = integrate_flow(
                    trotter_field(self.field_1, self.field_2, level), seeds,
                    1.0, self.config.h, weights=weights,
                    stride=self._stride(), threads=self.config.threads)
                result[level] = local_convergence_distance(split,
                                                           self.reference)
                logger.info("Level %d: distance %.6g", level, result[level])
            self.write_rows("trotter_distances.csv", ["level", "distance"],
                            result.items())
            return result
        return self._cached("distances", build)

    @property
    def interleaved(self):
        def build():
            seeds, weights = self.particles
            padding = 0.5 * (self.field_1.sup_norm + self.field_2.sup_norm)
            grid = GridSpec.for_domain(self.domain, self.config.grid,
                                       padding=padding)
            t = self.INTERLEAVED_TIME
            index = self.reference.index_of(t)
            reference = histogram(self.reference.positions(index), weights,
                                  grid, index, t)
            tests = [SmoothObservable.monomial(p) for p in self.TESTS]
            expected = np.asarray([reference.integrate(f) for f in tests])
            gaps = OrderedDict()
            masses = [reference.total_mass]
            for level in self.config.levels:
                pair = interleaved_densities(self.field_1, self.field_2,
                                             level, seeds, weights, t,
                                             self.config.h, grid,
                                             self.config.threads)
                gaps[level] = max(float(np.max(np.abs(
                    [d.integrate(f) for f in tests] - expected)))
                    for d in pair)
                masses.extend(d.total_mass for d in pair)
            self.write_rows("interleaved_gaps.csv", ["level", "gap"],
                            gaps.items())
            return gaps, masses, float(np.sum(weights))
        return self._cached("interleaved", build)

    def check_final_distance(self):
        distances = self.distances
        level = max(distances)
        return self.bounded_result(
            BaseCheck.HIGH, "Splitting flow distance at level {}".format(
                level), distances[level], self.FINAL_THRESHOLD)

    def check_distance_decrease(self):
        distances = self.distances
        ratio = _ratio(distances[max(distances)], distances[min(distances)])
        return self.bounded_result(
            BaseCheck.HIGH, "Splitting flow distance decrease", ratio,
            1.0 / self.DECREASE_FACTOR,
            messages=["level {}: {:.6g}".format(k, v)
                      for k, v in distances.items()])

    def check_interleaved_densities(self):
        """Polynomial moments of the interleaved densities approach rho_t"""
        gaps, _, _ = self.interleaved
        ratio = _ratio(gaps[max(gaps)], gaps[min(gaps)])
        return self.bounded_result(BaseCheck.MEDIUM,
                                   "Interleaved densities converge", ratio,
                                   self.SHRINK_RATIO)

    def check_mass_conservation(self):
        _, masses, total = self.interleaved
        leak = max(abs(m - total) for m in masses)
        return self.bounded_result(BaseCheck.LOW, "Histogram mass conserved",
                                   leak, 1e-12)


class ParallelogramScenario(Scenario):
    name = "parallelogram"
    description = ("Parallelogram identity for |du(.)| on two constant "
                   "fields; holds on Hilbert targets, fails on l1 and linf")
    topic = ("|du(Z1+Z2)|^2 + |du(Z1-Z2)|^2 = 2|du(Z1)|^2 + 2|du(Z2)|^2 "
             "exactly when the target is infinitesimally Hilbertian")
    statement = ("parallelogram identity for universally infinitesimally "
                 "Hilbertian targets")
    defaults = {"domain": "disk(1)", "target": "normed(2,l2)",
                "map": "identity", "field1": "translation(1,0)",
                "field2": "translation(0,1)", "samples": 20000,
                "eps": (2.0 ** -6, 2.0 ** -7, 2.0 ** -8)}

    IDENTITY_TOLERANCE = 0.01
    VIOLATION_FRACTION = 0.5
    RHS_FLOOR = 1e-8
    CLOSED_FORM_FLOOR = 1e-9

    @property
    def residual(self):
        def build():
            result = parallelogram_residual(self.map, self.field_1,
                                            self.field_2, self.domain,
                                            self.sample, self.config.eps)
            points = self.nodes
            self.write_rows("parallelogram_residual.csv",
                            ["x1", "x2", "residual", "rhs", "valid"],
                            [list(x) + [r, s, int(v)] for x, r, s, v in zip(
                                points, result.residual, result.rhs,
                                result.valid)])
            return result
        return self._cached("residual", build)

    @property
    def nodes(self):
        return self.sample.points[self.sample.weights > 0]

    def closed_form(self, points):
        oracle = self.map.oracle
        if oracle is None:
            return None
        z1, z2 = self.field_1, self.field_2
        return oracle(points, z1 + z2) ** 2 + oracle(points, z1 - z2) ** 2 \
            - 2 * oracle(points, z1) ** 2 - 2 * oracle(points, z2) ** 2

    def _expects_violation(self, closed, valid):
        if self.target.is_hilbert or self.target.is_tree or closed is None:
            return False
        return bool(np.any(np.abs(closed[valid]) > self.CLOSED_FORM_FLOOR))

    def check_parallelogram(self):
        result = self.residual
        valid = result.valid & (result.rhs > self.RHS_FLOOR)
        if not np.any(valid):
            return self.make_result(BaseCheck.HIGH, 0, 1,
                                    "Parallelogram identity",
                                    ["No valid node with a nonzero right side"])
        closed = self.closed_form(self.nodes)
        if not self._expects_violation(closed, valid):
            worst = np.max(np.abs(result.residual[valid])
                           / result.rhs[valid])
            return self.bounded_result(BaseCheck.HIGH,
                                       "Parallelogram identity", worst,
                                       self.IDENTITY_TOLERANCE)
        strict = valid & (np.abs(closed) > self.CLOSED_FORM_FLOOR)
        fraction = np.min(result.residual[strict] * np.sign(closed[strict])
                          / np.abs(closed[strict]))
        return self.bounded_result(
            BaseCheck.HIGH, "Expected parallelogram violation", fraction,
            self.VIOLATION_FRACTION, upper=False,
            messages=["Closed-form residual {:.6g} on {}".format(
                float(np.median(closed[strict])), self.target.name)])

    def check_residual_matches_closed_form(self):
        name = "Parallelogram residual matches closed form"
        result = self.residual
        closed = self.closed_form(self.nodes)
        if closed is None:
            return self.make_result(BaseCheck.MEDIUM, 0, 1, name, [
                "Map {} has no closed-form gradient".format(self.map.name)])
        valid = result.valid
        scale = np.maximum(result.rhs[valid], 1.0)
        worst = np.max(np.abs(result.residual[valid] - closed[valid]) / scale) \
            if np.any(valid) else 0.0
        return self.bounded_result(BaseCheck.MEDIUM, name, worst,
                                   self.IDENTITY_TOLERANCE)


class TreeTargetScenario(Scenario):
    name = "tree-target"
    description = ("Sector map from the disk into the tripod: metric "
                   "axioms, Lipschitz family, gradient and parallelogram "
                   "identity off the singular set")
    topic = ("a CAT(0) tree target is universally infinitesimally "
             "Hilbertian; distances are suprema of 1-Lipschitz functions")
    statement = ("CAT(0) targets are universally infinitesimally "
                 "Hilbertian")
    defaults = {"domain": "disk(1)", "target": "tripod", "map": "sector",
                "field1": "translation(1,0)", "field2": "translation(0,1)",
                "samples": 20000, "eps": (2.0 ** -6, 2.0 ** -7, 2.0 ** -8)}

    SINGULAR_MARGIN = 0.05
    ORACLE_POINTS = 100
    PAIRS = 100
    LEVELS = (1.0, 2.0, 4.0)
    ORACLE_TOLERANCE = 0.01
    PARALLELOGRAM_TOLERANCE = 0.02

    @property
    def regular_sample(self):
        def build():
            keep = None
            if self.target.is_tree and self.map.name == "sector":
                def keep(points):
                    return sector_singular_distance(
                        points, self.target.edges) >= self.SINGULAR_MARGIN
            return interior_sample(self.domain, self.sample,
                                   self.SINGULAR_MARGIN, keep)
        return self._cached("regular_sample", build)

    def check_metric_axioms(self):
        worst = metric_axiom_violation(self.target, 1000, self.config.seed)
        return self.bounded_result(BaseCheck.HIGH, "Target metric axioms",
                                   worst, 1e-12)

    def check_lipschitz_family_recovers_distance(self):
        rng = np.random.default_rng(self.config.seed)
        target = self.target
        scale = 2.0 if target.is_tree else 1.0
        a = target.random_points(self.PAIRS, rng, scale)
        b = target.random_points(self.PAIRS, rng, scale)
        if target.is_tree:
            centers = [(0.0, 0.0)] + [(float(k), 2.0)
                                      for k in range(target.edges)]
        else:
            centers = a
        family = build_lipschitz_family(target, centers, self.LEVELS)
        gap = np.max(np.abs(family.sup_difference(a, b)
                            - target.distance(a, b)))
        excess = family.max_lipschitz_ratio(a, b) - 1.0
        return self.bounded_result(BaseCheck.MEDIUM,
                                   "Lipschitz family recovers distance",
                                   max(gap, excess), 1e-10)

    def check_gradient_matches_oracle(self):
        name = "Tree gradient matches sector closed form"
        if self.map.oracle is None:
            return self.make_result(BaseCheck.HIGH, 0, 1, name, [
                "Map {} has no closed-form gradient".format(self.map.name)])
        regular = self.regular_sample
        count = min(self.ORACLE_POINTS, len(regular.points))
        subset = MeasureSample(regular.points[:count],
                               regular.weights[:count],
                               regular.inside[:count])
        report = directional_gradient(self.map, self.field_1, self.domain,
                                      self.config.p, self.config.eps, subset)
        expected = self.map.oracle(report.points, self.field_1)
        errors = relative_error(report.H, expected, 1e-2)
        return self.bounded_result(BaseCheck.HIGH, name,
                                   np.max(errors) if errors.size else 0.0,
                                   self.ORACLE_TOLERANCE)

    def check_parallelogram_off_singular_set(self):
        result = parallelogram_residual(self.map, self.field_1, self.field_2,
                                        self.domain, self.regular_sample,
                                        self.config.eps)
        valid = result.valid & (result.rhs > 1e-8)
        worst = np.max(np.abs(result.residual[valid]) / result.rhs[valid]) \
            if np.any(valid) else 0.0
        return self.bounded_result(BaseCheck.HIGH,
                                   "Tree parallelogram identity", worst,
                                   self.PARALLELOGRAM_TOLERANCE)

    def check_derivative_needs_normed_target(self):
        name = "Directional derivative restricted to normed targets"
        points = self.regular_sample.points[:10]
        try:
            directional_derivative(self.map, self.field_1, points,
                                   self.config.tau)
            refused = False
        except UnsupportedTargetError:
            refused = True
        passed = refused == (not self.target.is_normed)
        messages = [] if passed else [
            "Unexpected behaviour on {}".format(self.target.name)]
        return self.make_result(BaseCheck.LOW, int(passed), 1, name,
                                messages, refused, not self.target.is_normed)


def _circle(times):
    return np.column_stack([np.cos(times), np.sin(times)])


def _tripod_path(times):
    return np.column_stack([np.where(times <= 1.0, 0.0, 1.0),
                            np.abs(1.0 - times)])


class CurveEnergyScenario(Scenario):
    name = "curve-energy"
    description = ("Energies E_{p,eps} and metric speed of circle, line, "
                   "tripod and constant curves")
    topic = ("curve energies increase to the integral of the p-th power of "
             "the metric speed as eps decreases")
    statement = "energy and metric speed of Sobolev curves"
    defaults = {"p": 2.0}

    STEPS = 4096
    CLOSED_FORM_EPS = math.pi / 8
    CLOSED_FORM_TOLERANCE = 1e-3
    LIMIT_TOLERANCE = 0.01

    @property
    def curves(self):
        def build():
            l2 = TargetSpace.normed(2)
            reals = TargetSpace.normed(1)
            tripod = TargetSpace.tripod()
            circle = SampledCurve.from_function(_circle, 2 * math.pi,
                                                self.STEPS, l2)
            line = SampledCurve.from_function(lambda t: t, 1.0, self.STEPS,
                                              reals)
            path = SampledCurve.from_function(_tripod_path, 2.0, self.STEPS,
                                              tripod)
            constant = SampledCurve.from_function(
                lambda t: np.zeros((len(t), 2)), 1.0, 64, l2)
            return OrderedDict([
                ("circle", (circle, [math.pi / 2 ** k for k in range(1, 7)])),
                ("line", (line, [2.0 ** -k for k in range(2, 8)])),
                ("tripod", (path, [2.0 ** -k for k in range(2, 8)])),
                ("constant", (constant, [2.0 ** -k for k in range(2, 6)])),
            ])
        return self._cached("curves", build)

    @property
    def profiles(self):
        def build():
            result = OrderedDict()
            for name, (curve, eps) in self.curves.items():
                result[name] = curve_energy(curve, self.config.p, eps)
                path = self.artifact_path("{}_profile.csv".format(name))
                if path is not None:
                    result[name].to_csv(path)
            return result
        return self._cached("profiles", build)

    def _tolerance(self):
        return max(curve.dt for curve, _ in self.curves.values())

    def check_circle_closed_form(self):
        curve, _ = self.curves["circle"]
        eps = self.CLOSED_FORM_EPS
        value = curve_energy_eps(curve, self.config.p, eps)
        expected = (2 * math.pi - eps) * (2 * math.sin(eps / 2) / eps) ** \
            self.config.p
        return self.bounded_result(BaseCheck.HIGH,
                                   "Circle energy closed form",
                                   abs(value - expected),
                                   self.CLOSED_FORM_TOLERANCE)

    def check_circle_energy_limit(self):
        profile = self.profiles["circle"]
        return self.tolerance_result(BaseCheck.HIGH, "Circle energy limit",
                                     profile.energy, 2 * math.pi,
                                     self.LIMIT_TOLERANCE)

    def check_line_energy(self):
        profile = self.profiles["line"]
        return self.bounded_result(BaseCheck.MEDIUM, "Line energy",
                                   abs(profile.energy - (1 - profile.eps[-1])),
                                   1e-9)

    def check_monotonicity(self):
        worst = max(p.monotonicity_violation() for p in
                    self.profiles.values())
        return self.bounded_result(BaseCheck.HIGH, "Energy monotone in eps",
                                   worst, self._tolerance())

    def check_subadditivity(self):
        worst = -np.inf
        for curve, eps_list in self.curves.values():
            for eps in eps_list:
                worst = max(worst, subadditivity_gap(
                    curve, self.config.p, eps, (0.5, 0.5)))
        return self.bounded_result(BaseCheck.HIGH, "Energy subadditivity",
                                   worst, self._tolerance())

    def check_tail_vanishes(self):
        worst = max(float(np.max(np.diff(p.tail()))) for p in
                    self.profiles.values())
        return self.bounded_result(BaseCheck.MEDIUM,
                                   "eps E^(1/p) decreases to 0", worst, 0.0)

    def check_metric_speed_order(self):
        order = speed_convergence_order(_circle, 2 * math.pi, 512,
                                        TargetSpace.normed(2),
                                        lambda t: np.ones_like(t))
        return self.tolerance_result(BaseCheck.MEDIUM,
                                     "Metric speed convergence order", order,
                                     2.0, 0.1)

    def check_tree_speed(self):
        curve, _ = self.curves["tripod"]
        speeds = metric_speeds(curve)
        away = np.abs(curve.times - 1.0) > 2 * curve.dt
        return self.bounded_result(BaseCheck.MEDIUM, "Tree geodesic speed",
                                   np.max(np.abs(speeds[away] - 1.0)), 1e-6)

    def check_chain_rule(self):
        curve, _ = self.curves["circle"]
        l2 = curve.target
        reals = TargetSpace.normed(1)
        worst = max(
            chain_rule_check(curve, lambda y: y,
                             lambda y: np.ones(len(y)), l2),
            chain_rule_check(curve, lambda y: 2 * y,
                             lambda y: np.full(len(y), 2.0), l2),
            chain_rule_check(curve, lambda y: np.linalg.norm(y, axis=1),
                             lambda y: np.ones(len(y)), reals))
        return self.bounded_result(BaseCheck.LOW, "Chain rule for speeds",
                                   worst, 1e-8)


class StabilityMollifiedScenario(Scenario):
    name = "stability-mollified"
    description = ("Time-mollified splitting fields and their flows against "
                   "the mollified sum")
    topic = ("fields converging weakly in time and strongly in space have "
             "flows converging locally in measure")
    statement = "stability of flows under weak in time convergence"
    defaults = {"domain": "disk(2)", "field1": "rotation",
                "field2": "translation(0.3,0)", "particles": 1000,
                "samples": 2000}

    DECREASE_FACTOR = 3.0
    PRESERVED_TOLERANCE = 1e-6

    @property
    def mollifier(self):
        return self._cached("mollifier", lambda: Mollifier.from_tag(
            self.config.mollifier))

    def _flow(self, field):
        seeds, weights = self.particles
        steps = steps_for(1.0, self.config.h)
        stride = steps // 64 if steps and steps % 64 == 0 else 1
        return integrate_flow(field, seeds, 1.0, self.config.h,
                              weights=weights, stride=stride,
                              threads=self.config.threads)

    @property
    def convergence(self):
        def build():
            h = self.config.h
            nodes = interior_sample(self.domain, self.sample, 0.0)
            summed = mollify_field(
                TimeDependentField.constant(self.field_1 + self.field_2, 1.0),
                self.mollifier, h)
            reference = self._flow(summed)
            rows = OrderedDict()
            for level in self.config.levels:
                mollified = mollify_field(
                    trotter_field(self.field_1, self.field_2, level),
                    self.mollifier, h)
                rows[level] = (
                    field_l1_distance(mollified, summed, nodes, h),
                    local_convergence_distance(self._flow(mollified),
                                               reference))
                logger.info("Level %d: field %.6g, flow %.6g", level,
                            *rows[level])
            self.write_rows("stability.csv",
                            ["level", "field_l1", "flow_distance"],
                            [(k,) + v for k, v in rows.items()])
            return rows
        return self._cached("convergence", build)

    def check_field_convergence(self):
        rows = self.convergence
        ratio = _ratio(rows[max(rows)][0], rows[min(rows)][0])
        return self.bounded_result(BaseCheck.HIGH,
                                   "Mollified splitting fields converge",
                                   ratio, 1.0 / self.DECREASE_FACTOR)

    def check_flow_convergence(self):
        rows = self.convergence
        ratio = _ratio(rows[max(rows)][1], rows[min(rows)][1])
        return self.bounded_result(
            BaseCheck.HIGH, "Mollified splitting flows converge", ratio,
            1.0 / self.DECREASE_FACTOR,
            messages=["level {}: {:.6g}".format(k, v[1])
                      for k, v in rows.items()])

    def check_constant_field_preserved(self):
        """A constant-in-time field is unchanged away from 0 and 1"""
        field = self.field_1
        mollified = mollify_field(TimeDependentField.constant(field, 1.0),
                                  self.mollifier, self.config.h)
        points = interior_sample(self.domain, self.sample, 0.0).points
        radius = self.mollifier.radius
        worst = 0.0
        for t in (0.25, 0.5, 0.75):
            if t < radius or t > 1.0 - radius:
                continue
            gap = np.linalg.norm(mollified.field_at(t)(points) - field(points),
                                 axis=1)
            worst = max(worst, float(np.max(gap)))
        return self.bounded_result(BaseCheck.LOW,
                                   "Mollification preserves constant fields",
                                   worst / max(field.sup_norm, 1e-12),
                                   self.PRESERVED_TOLERANCE)


class LinkPostcompositionScenario(Scenario):
    name = "link-postcomposition"
    description = ("Slope of an affine map against its directional "
                   "gradients and derivatives")
    topic = ("|du(Z)| <= |d'u| |Z|; the derivative vector has norm "
             "|du(Z)| and is linear in Z")
    statement = ("post-composition Sobolev maps: |du(Z)| <= |d'u| |Z| and "
                 "regularity along flows")
    defaults = {"domain": "disk(1)", "target": "normed(2,l2)",
                "map": "affine(1,2,0,1)", "field1": "rotation",
                "field2": "translation(1,0)", "samples": 4000,
                "eps": (2.0 ** -8, 2.0 ** -9, 2.0 ** -10)}

    MARGIN = 0.05
    POINTS = 1000
    SLOPE_TOLERANCE = 0.01
    LINK_TOLERANCE = -0.01
    NORM_TOLERANCE = 0.01
    LINEARITY_TOLERANCE = 1e-6
    FLOW_HORIZON = 0.2
    FAMILY_LEVELS = (1.0, 2.0, 4.0)
    REGULARITY_TIMES = 21
    REGULARITY_TOLERANCE = 1e-3
    UPPER_GRADIENT_TIMES = 101
    UPPER_GRADIENT_TOLERANCE = 1e-5
    RATIO_RATE = 1.5

    @property
    def nodes(self):
        def build():
            nodes = interior_sample(self.domain, self.sample, self.MARGIN)
            count = min(self.POINTS, len(nodes.points))
            return MeasureSample(nodes.points[:count], nodes.weights[:count],
                                 nodes.inside[:count])
        return self._cached("nodes", build)

    def _estimate(self, field):
        return postcomposition_gradient(self.map, field, self.nodes.points,
                                        self.config.directions,
                                        self.config.tau)

    def _operator_norm(self):
        matrix = self.map.matrix
        if self.target.is_hilbert:
            return float(np.linalg.svd(matrix, compute_uv=False)[0])
        angles = np.linspace(0.0, np.pi, 4096, endpoint=False)
        directions = np.column_stack([np.cos(angles), np.sin(angles)])
        return float(np.max(self.target.norm(directions.dot(matrix.T))))

    def check_slope_matches_operator_norm(self):
        name = "Slope matches operator norm"
        if self.map.matrix is None:
            return self.make_result(BaseCheck.HIGH, 0, 1, name, [
                "Map {} is not affine".format(self.map.name)])
        slope = self._estimate(self.field_1).upper_gradient
        expected = self._operator_norm()
        return self.bounded_result(
            BaseCheck.HIGH, name,
            np.max(relative_error(slope, expected, 1e-12)),
            self.SLOPE_TOLERANCE,
            messages=["operator norm {:.6g}".format(expected)])

    def check_link_inequality(self):
        worst = np.inf
        for field in (self.field_1, self.field_2):
            estimate = self._estimate(field)
            scale = estimate.upper_gradient * np.linalg.norm(
                field(self.nodes.points), axis=1)
            floor = max(1e-3 * float(np.max(scale)), 1e-12)
            worst = min(worst, float(np.min(estimate.slack
                                            / np.maximum(scale, floor))))
        return self.bounded_result(BaseCheck.HIGH,
                                   "Slope bounds directional gradient", worst,
                                   self.LINK_TOLERANCE, upper=False)

    def check_derivative_norm_matches_energy(self):
        worst = 0.0
        for field in (self.field_1, self.field_2):
            vectors = directional_derivative(self.map, field,
                                             self.nodes.points,
                                             self.config.tau)
            report = directional_gradient(self.map, field, self.domain,
                                          self.config.p, self.config.eps,
                                          self.nodes)
            keep = ~report.masked_final
            errors = relative_error(vectors.norms()[keep], report.H[keep],
                                    1e-2)
            if errors.size:
                worst = max(worst, float(np.max(errors)))
        return self.bounded_result(BaseCheck.MEDIUM,
                                   "Derivative norm matches |du(Z)|", worst,
                                   self.NORM_TOLERANCE)

    def check_linearity(self):
        worst = max(linearity_check(self.map, self.field_1, self.field_2,
                                    self.nodes.points, self.config.tau,
                                    alphas)
                    for alphas in ((1.0, 1.0), (0.5, -1.0)))
        return self.bounded_result(BaseCheck.MEDIUM,
                                   "Directional derivative is linear", worst,
                                   self.LINEARITY_TOLERANCE)

    @property
    def flow_horizon(self):
        """Time the interior nodes stay inside the domain, at most 0.2"""
        return self._cached("flow_horizon", lambda: min(
            self.FLOW_HORIZON,
            escape_time_of_set(self.nodes.points, self.field_1, self.domain)))

    @property
    def family(self):
        return self._cached("family", lambda: build_lipschitz_family(
            self.target, self.map(self.nodes.points[:3]), self.FAMILY_LEVELS))

    def check_regularity_along_flow(self):
        times = np.linspace(0.0, self.flow_horizon, self.REGULARITY_TIMES)
        worst = max(regularity_check(self.map, self.field_1,
                                     self.family.member(index),
                                     self.nodes.points, times,
                                     self.config.tau)
                    for index in range(len(self.family)))
        return self.bounded_result(
            BaseCheck.MEDIUM, "Lipschitz observables vary at most |du(Z)|",
            worst, self.REGULARITY_TOLERANCE,
            messages=["{} observables over [0, {:.4g}]".format(
                len(self.family), self.flow_horizon)])

    def check_upper_gradient_along_flow(self):
        times = np.linspace(0.0, self.flow_horizon, self.UPPER_GRADIENT_TIMES)
        worst = upper_gradient_check(self.map, self.field_1,
                                     self.nodes.points, times,
                                     self.config.tau)
        return self.bounded_result(
            BaseCheck.MEDIUM, "Displacement bounded by integrated |du(Z)|",
            worst, self.UPPER_GRADIENT_TOLERANCE)

    def check_incremental_ratios(self):
        name = "Incremental ratios converge to dg(Z)"
        eps = np.asarray(self.config.eps, dtype=float)
        weights = self.nodes.weights / np.sum(self.nodes.weights)
        gaps = incremental_ratio_gaps(SmoothObservable.monomial((2, 0)),
                                      self.field_1, self.nodes.points, weights,
                                      0.5 * self.flow_horizon, eps,
                                      self.config.p)
        messages = ["gaps " + ", ".join("{:.3g}".format(g) for g in gaps)]
        if np.any(np.diff(gaps) > 1e-12):
            return self.make_result(BaseCheck.MEDIUM, 0, 1, name, messages + [
                "gaps increase as eps decreases"], float(np.max(gaps)), 0.0)
        if gaps[0] <= 1e-12:
            return self.bounded_result(BaseCheck.MEDIUM, name, 0.0,
                                       self.RATIO_RATE, messages=messages)
        # first order: the gap shrinks at least like eps
        rate = (gaps[-1] / gaps[0]) / (eps[-1] / eps[0])
        return self.bounded_result(BaseCheck.MEDIUM, name, rate,
                                   self.RATIO_RATE, messages=messages)


class FlowIdentitiesScenario(Scenario):
    name = "flow-identities"
    description = ("Speed identity, compression bound, continuity equation "
                   "and time rescaling for closed-form flows")
    topic = ("trajectories move at speed |Z|, densities compress at most "
             "like exp(int (div Z)^-), and rho_t solves the continuity "
             "equation")
    statement = ("regular Lagrangian flows: metric speed, compression "
                 "bound and continuity equation")
    defaults = {"domain": "halfdisk(1)", "field1": "rotation",
                "field2": "contraction", "particles": 100000,
                "alphas": (0.5, 2.0, -1.0)}

    SPEED_SEEDS = 1000
    SPEED_TOLERANCE = 1e-3
    SPEED_STEPS = 256
    COMPRESSION_TIME = 0.5
    MONTE_CARLO_SLACK = 0.1
    CONTINUITY_STEPS = 128
    CONTINUITY_TOLERANCE = 1e-2
    SCALING_SEEDS = 1000
    SCALING_TIME = 0.5
    SCALING_TOLERANCE = 1e-6

    @property
    def grid(self):
        radius = self.domain.max_norm
        return GridSpec(-radius * np.ones(2), radius * np.ones(2),
                        self.config.grid)

    def check_speed_identity(self):
        radius = self.domain.max_norm
        annulus = SourceDomain.annulus(0.5 * radius, radius)
        seeds, _ = seed_particles(annulus, 4 * self.SPEED_SEEDS,
                                  self.config.seed)
        flow = integrate_flow(self.field_1, seeds[:self.SPEED_SEEDS],
                              self.SPEED_STEPS * self.config.h, self.config.h,
                              threads=self.config.threads)
        return self.bounded_result(BaseCheck.HIGH, "Trajectory speed is |Z|",
                                   flow_speed_identity(flow),
                                   self.SPEED_TOLERANCE)

    @property
    def compression(self):
        def build():
            seeds, weights = self.particles
            t = self.COMPRESSION_TIME
            steps = steps_for(t, self.config.h)
            flow = integrate_flow(self.field_2, seeds, t, self.config.h,
                                  weights=weights, stride=steps or 1,
                                  threads=self.config.threads)
            initial = pushforward_density(flow, self.grid, 0)
            later = pushforward_density(flow, self.grid, len(flow.times) - 1)
            path = self.artifact_path("compressed_density.csv")
            if path is not None:
                later.to_csv(path)
            return initial, later, float(np.sum(weights))
        return self._cached("compression", build)

    def check_compression_bound(self):
        initial, later, _ = self.compression
        ratio = compression_ratio(
            initial, later, self.field_2.div_neg_bound * self.COMPRESSION_TIME)
        return self.bounded_result(BaseCheck.HIGH, "Compression bound", ratio,
                                   1.0 + self.MONTE_CARLO_SLACK)

    def check_mass_conservation(self):
        initial, later, total = self.compression
        leak = max(abs(initial.total_mass - total),
                   abs(later.total_mass - total))
        return self.bounded_result(BaseCheck.LOW, "Histogram mass conserved",
                                   leak, 1e-12)

    def check_continuity_equation(self):
        seeds, weights = self.particles
        h = self.config.h
        steps = 2 * self.CONTINUITY_STEPS
        flow = integrate_flow(self.field_1, seeds, steps * h, h,
                              weights=weights, stride=self.CONTINUITY_STEPS,
                              threads=self.config.threads)
        densities = [pushforward_density(flow, self.grid, k)
                     for k in range(len(flow.times))]
        tests = [SmoothObservable.squared_radius()] + [
            SmoothObservable.monomial(p) for p in
            ((1, 0), (0, 1), (2, 0), (1, 1))]
        return self.bounded_result(
            BaseCheck.MEDIUM, "Continuity equation",
            continuity_residual(densities, self.field_1, tests),
            self.CONTINUITY_TOLERANCE)

    def check_flow_scaling(self):
        seeds, _ = self.particles
        worst = max(flow_scaling_deviation(self.field_1, alpha,
                                           seeds[:self.SCALING_SEEDS],
                                           self.SCALING_TIME, self.config.h)
                    for alpha in self.config.alphas)
        return self.bounded_result(BaseCheck.MEDIUM, "Flow time rescaling",
                                   worst, self.SCALING_TOLERANCE)


class TriangleLinearityScenario(Scenario):
    name = "triangle-linearity"
    description = ("Triangle inequality, homogeneity and linearity of "
                   "directional gradients on affine and rotation scenarios")
    topic = ("|du(.)| is positively homogeneous and subadditive; the "
             "derivative is linear in the field")
    statement = ("triangle inequality, positive homogeneity and linearity "
                 "of du(Z) in Z")
    defaults = {"domain": "disk(1)", "target": "normed(2,l2)",
                "map": "affine(1,2,0,1)", "field1": "translation(1,0)",
                "field2": "translation(0,1)", "samples": 20000,
                "eps": (2.0 ** -6, 2.0 ** -7, 2.0 ** -8)}

    TRIANGLE_TOLERANCE = -0.01
    SCALING_TOLERANCE = 0.01
    LINEARITY_TOLERANCE = 1e-9
    LINEARITY_POINTS = 1000

    def _triangle(self, u, field_1, field_2):
        slack, scale, valid = triangle_slack(u, field_1, field_2, self.domain,
                                             self.sample, self.config.eps,
                                             self.config.p)
        floor = max(1e-3 * float(np.max(scale[valid])), 1e-12)
        return float(np.min(slack[valid] / np.maximum(scale[valid], floor)))

    @property
    def rotation_pair(self):
        return self._cached("rotation_pair", lambda: (
            VectorField.rotation(self.domain.max_norm),
            VectorField.translation((0.3, 0.0))))

    def check_triangle_configured(self):
        worst = self._triangle(self.map, self.field_1, self.field_2)
        return self.bounded_result(
            BaseCheck.HIGH, "Triangle inequality ({})".format(self.map.name),
            worst, self.TRIANGLE_TOLERANCE, upper=False)

    def check_triangle_rotation_translation(self):
        rotation, translation = self.rotation_pair
        worst = self._triangle(MetricMap.identity(self.target), rotation,
                               translation)
        return self.bounded_result(
            BaseCheck.HIGH, "Triangle inequality (rotation + translation)",
            worst, self.TRIANGLE_TOLERANCE, upper=False)

    def check_scaling(self):
        rotation, _ = self.rotation_pair
        cases = ((self.map, self.field_1),
                 (MetricMap.identity(self.target), rotation))
        worst = 0.0
        messages = []
        for u, field in cases:
            for alpha in self.config.alphas:
                deviation = scaling_check(u, field, alpha, self.domain,
                                          self.sample, self.config.eps,
                                          self.config.p)
                if deviation > self.SCALING_TOLERANCE:
                    messages.append("{} along {} at alpha={:g}: {:.6g}".format(
                        u.name, field.name, alpha, deviation))
                worst = max(worst, deviation)
        return self.bounded_result(BaseCheck.HIGH, "Positive homogeneity",
                                   worst, self.SCALING_TOLERANCE,
                                   messages=messages)

    def check_linearity(self):
        points = interior_sample(self.domain, self.sample,
                                 0.05).points[:self.LINEARITY_POINTS]
        worst = max(linearity_check(self.map, self.field_1, self.field_2,
                                    points, self.config.tau, alphas)
                    for alphas in ((1.0, 1.0), (2.0, -1.0)))
        return self.bounded_result(BaseCheck.MEDIUM,
                                   "Directional derivative is linear", worst,
                                   self.LINEARITY_TOLERANCE)


SCENARIOS = OrderedDict((cls.name, cls) for cls in (
    RotationEnergyScenario,
    TrotterConvergenceScenario,
    ParallelogramScenario,
    TreeTargetScenario,
    CurveEnergyScenario,
    StabilityMollifiedScenario,
    LinkPostcompositionScenario,
    FlowIdentitiesScenario,
    TriangleLinearityScenario,
))


def get_scenario(name):
    if name not in SCENARIOS:
        raise UnknownTagError("scenario", name, SCENARIOS)
    return SCENARIOS[name]


def list_scenarios():
    """Catalog entries in a stable order, with their default configs"""
    return [CatalogEntry(cls.name, cls.description, cls.topic, cls.statement,
                         cls.default_config())
            for cls in SCENARIOS.values()]


def run_scenario(config, write=True):
    """
    Runs the scenario named in config.

    Parameters
    ----------
    config : ScenarioConfig
        the configuration; keys it leaves unset take the scenario defaults
    write : bool
        write report.json and the CSV artifacts to the output directory

    Returns
    -------
    RunReport
        one entry per check of the scenario
    """
    scenario = get_scenario(config.scenario)(config, write=write)
    logger.info("Running scenario %s", scenario.name)
    started = utc_now()
    clock = time.perf_counter()
    results = scenario.run()
    report = RunReport(scenario.name, scenario.config,
                       [r.serialize() for r in results], started,
                       time.perf_counter() - clock, scenario.artifacts)
    if write:
        report.write(scenario.config.out)
    logger.info("Scenario %s %s in %.1fs", scenario.name,
                "passed" if report.passed else "failed", report.seconds)
    return report
