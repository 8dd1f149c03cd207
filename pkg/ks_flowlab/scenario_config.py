# -*- coding: utf-8 -*-

"""
ks_flowlab.scenario_config

Flat ``key = value`` scenario configuration files. Every key is documented
in KNOBS with its default, its parser and the validator its value must pass.
"""

import logging
from collections import OrderedDict, namedtuple

import numpy as np

from ks_flowlab.errors import InvalidInputError
from ks_flowlab.fields import Mollifier, VectorField
from ks_flowlab.maps import MetricMap
from ks_flowlab.metric_core import TAG_REGEX, SourceDomain, TargetSpace
from ks_flowlab.validators import ValidatorFactory

logger = logging.getLogger(__name__)

SCENARIO_REGEX = r"^[a-z][a-z0-9\-]*$"

Knob = namedtuple("Knob", ["default", "parser", "validator", "help"])


def _parse_int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError("{!r} is not an integer".format(text))
    return int(value)


def _parse_float(text):
    return float(text)


def _parse_float_list(text):
    return tuple(float(item) for item in text.split(",") if item.strip())


def _parse_int_list(text):
    return tuple(_parse_int(item) for item in text.split(",") if item.strip())


def _parse_str(text):
    return text.strip()


def _decreasing_positive_validator():
    positives = ValidatorFactory.list_validator(
        ValidatorFactory.range_validator(0.0, None, low_open=True))

    def f(x):
        return positives(x) and bool(np.all(np.diff(np.asarray(x)) < 0))
    return f


def _format(value):
    if isinstance(value, tuple):
        return ",".join(_format(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


_V = ValidatorFactory

KNOBS = OrderedDict([
    ("scenario", Knob("rotation-energy", _parse_str,
                      _V.string_validator(SCENARIO_REGEX),
                      "scenario name, see `ks-flowlab list`")),
    ("domain", Knob("disk(1)", _parse_str,
                    _V.tag_validator(SourceDomain.from_tag),
                    "source domain tag")),
    ("target", Knob("normed(2,l2)", _parse_str,
                    _V.tag_validator(TargetSpace.from_tag),
                    "target space tag")),
    ("field1", Knob("rotation", _parse_str,
                    _V.tag_validator(VectorField.from_tag),
                    "first vector field tag")),
    ("field2", Knob("translation(0.3,0)", _parse_str,
                    _V.tag_validator(VectorField.from_tag),
                    "second vector field tag")),
    ("map", Knob("identity", _parse_str, _V.string_validator(TAG_REGEX),
                 "map tag, resolved against the target")),
    ("p", Knob(2.0, _parse_float, _V.range_validator(1.0, None, low_open=True),
               "energy exponent in (1, inf)")),
    ("samples", Knob(100000, _parse_int, _V.integer_validator(),
                     "Monte Carlo quadrature nodes")),
    ("particles", Knob(2000, _parse_int, _V.integer_validator(),
                       "flow seeds")),
    ("seed", Knob(0, _parse_int, _V.integer_validator(nonzero=False),
                  "random seed")),
    ("eps", Knob((2.0 ** -4, 2.0 ** -5, 2.0 ** -6, 2.0 ** -7, 2.0 ** -8),
                 _parse_float_list, _decreasing_positive_validator(),
                 "strictly decreasing energy scales")),
    ("h", Knob(2.0 ** -10, _parse_float,
               _V.range_validator(0.0, 1.0, low_open=True),
               "integrator step")),
    ("tau", Knob(1e-4, _parse_float, _V.range_validator(0.0, None,
                                                        low_open=True),
                 "finite difference step")),
    ("levels", Knob((2, 4, 6, 8), _parse_int_list,
                    _V.list_validator(_V.integer_validator()),
                    "dyadic splitting levels")),
    ("grid", Knob(64, _parse_int, _V.integer_validator(),
                  "histogram cells per axis")),
    ("threads", Knob(1, _parse_int, _V.integer_validator(),
                     "worker threads")),
    ("directions", Knob(64, _parse_int, _V.integer_validator(),
                        "unit directions for the slope estimate")),
    ("alphas", Knob((0.0, 0.5, 1.0, 2.0, -1.0), _parse_float_list,
                    _V.list_validator(_V.float_validator()),
                    "scaling coefficients")),
    ("mollifier", Knob("bump(0.05)", _parse_str,
                       _V.tag_validator(Mollifier.from_tag),
                       "time mollifier tag")),
    ("out", Knob("ks-flowlab-out", _parse_str, _V.nonempty_validator(),
                 "output directory")),
])


class ScenarioConfig(object):
    """
    Scenario configuration: explicitly set knobs on top of the KNOBS
    defaults.

    Parameters
    ----------
    values : dict, optional
        knob values, either parsed already or as strings
    """

    def __init__(self, values=None):
        self._values = {}
        for key, value in (values or {}).items():
            self._set(key, value)

    def _set(self, key, value):
        if key not in KNOBS:
            raise InvalidInputError("Unknown config key {!r}".format(key))
        knob = KNOBS[key]
        if isinstance(value, str):
            try:
                value = knob.parser(value)
            except ValueError:
                raise InvalidInputError(
                    "Cannot parse {} = {!r}".format(key, value))
        elif isinstance(value, (list, tuple)):
            value = tuple(value)
        if isinstance(knob.default, float) and isinstance(value, int) and \
                not isinstance(value, bool):
            value = float(value)
        if not knob.validator(value):
            raise InvalidInputError(
                "Value {!r} is invalid for {} ({})".format(value, key,
                                                          knob.help))
        self._values[key] = value

    def __getattr__(self, key):
        if key.startswith("_") or key not in KNOBS:
            raise AttributeError(key)
        return self[key]

    def __getitem__(self, key):
        if key not in KNOBS:
            raise KeyError(key)
        return self._values.get(key, KNOBS[key].default)

    def __eq__(self, other):
        return isinstance(other, ScenarioConfig) and \
            self.as_dict() == other.as_dict()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "ScenarioConfig({})".format(self.scenario)

    @property
    def explicit(self):
        """Keys set explicitly, in KNOBS order"""
        return [key for key in KNOBS if key in self._values]

    def as_dict(self):
        return OrderedDict((key, self[key]) for key in KNOBS)

    def to_json(self):
        return OrderedDict((key, list(value) if isinstance(value, tuple)
                            else value) for key, value in self.as_dict().items())

    def with_defaults(self, defaults):
        """A copy where defaults fill the keys not set explicitly"""
        values = dict(defaults)
        values.update(self._values)
        return ScenarioConfig(values)

    def with_overrides(self, **overrides):
        """A copy with the non-None overrides applied"""
        values = dict(self._values)
        values.update((k, v) for k, v in overrides.items() if v is not None)
        return ScenarioConfig(values)

    def validate(self):
        """Cross-key checks: the map tag must resolve against the target"""
        MetricMap.from_tag(self.map, TargetSpace.from_tag(self.target))
        return self

    def dumps(self):
        lines = ["# ks-flowlab scenario configuration"]
        for key, value in self.as_dict().items():
            lines.append("{} = {}".format(key, _format(value)))
        return "\n".join(lines) + "\n"

    def dump(self, path):
        with open(path, "w") as handle:
            handle.write(self.dumps())

    @classmethod
    def parse(cls, text):
        """
        Parses ``key = value`` lines; ``#`` starts a comment.

        Parameters
        ----------
        text : str
            configuration text

        Returns
        -------
        ScenarioConfig
            config holding the keys present in the text
        """
        values = {}
        for number, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidInputError(
                    "Line {}: expected key = value, got {!r}".format(number,
                                                                    raw))
            key, value = (part.strip() for part in line.split("=", 1))
            if key in values:
                raise InvalidInputError(
                    "Line {}: duplicate key {!r}".format(number, key))
            values[key] = value
        return cls(values)

    @classmethod
    def load(cls, path):
        with open(path) as handle:
            config = cls.parse(handle.read())
        logger.debug("Loaded %s from %s", config, path)
        return config
