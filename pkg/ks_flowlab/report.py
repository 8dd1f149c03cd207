# -*- coding: utf-8 -*-

"""
ks_flowlab.report

Run reports: the resolved configuration, one entry per scenario check,
the wall clock and the artifacts written next to the JSON report.
"""

import json
import logging
import os
from collections import OrderedDict
from datetime import datetime

from dateutil import tz

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
REPORT_NAME = "report.json"


def utc_now():
    return datetime.now(tz.tzutc())


class RunReport(object):
    """
    Outcome of one scenario run.

    Parameters
    ----------
    scenario : str
        scenario name
    config : ScenarioConfig
        the resolved configuration
    checks : list
        serialized check results, one per check method
    started : datetime.datetime
        timezone-aware start time
    seconds : float
        elapsed wall clock
    artifacts : list of str
        paths of the files written by the run
    """

    def __init__(self, scenario, config, checks, started, seconds,
                 artifacts=None):
        self.scenario = scenario
        self.config = config
        self.checks = checks
        self.started = started
        self.seconds = float(seconds)
        self.artifacts = list(artifacts or [])

    @property
    def passed(self):
        return all(check["passed"] for check in self.checks)

    @property
    def failed_checks(self):
        return [check["name"] for check in self.checks if not check["passed"]]

    def check(self, name):
        for entry in self.checks:
            if entry["name"] == name:
                return entry
        raise KeyError(name)

    def to_json(self, include_wall_clock=True):
        result = OrderedDict([
            ("schema", SCHEMA_VERSION),
            ("scenario", self.scenario),
            ("config", self.config.to_json()),
            ("checks", self.checks),
            ("artifacts", self.artifacts),
            ("passed", self.passed),
        ])
        if include_wall_clock:
            result["wall_clock"] = {"started": self.started.isoformat(),
                                    "seconds": self.seconds}
        return result

    def dumps(self, include_wall_clock=True):
        return json.dumps(self.to_json(include_wall_clock), indent=2,
                          sort_keys=True)

    def write(self, directory):
        """Writes report.json into directory and returns its path"""
        if not os.path.isdir(directory):
            os.makedirs(directory)
        path = os.path.join(directory, REPORT_NAME)
        with open(path, "w") as handle:
            handle.write(self.dumps())
            handle.write("\n")
        logger.info("Wrote %s", path)
        return path

    def summary(self):
        lines = ["{}: {}".format(self.scenario,
                                 "PASS" if self.passed else "FAIL")]
        for check in self.checks:
            lines.append("  [{}] {} measured={} bound={}".format(
                "ok" if check["passed"] else "!!", check["name"],
                _short(check["measured"]), _short(check["bound"])))
            for message in check["msgs"]:
                lines.append("       {}".format(message))
        return "\n".join(lines)


def _short(value):
    if isinstance(value, float):
        return "{:.6g}".format(value)
    return str(value)
